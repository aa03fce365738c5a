//! Idealized fully-associative LRU cache.
//!
//! The cache holds up to `M` array elements in blocks of `B` consecutive
//! elements (`B` divides `M`), starts empty, and evicts the least recently
//! used block. Addresses are element indices of a single array assumed to
//! start at a block boundary; no other memory traffic is modeled.

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheConfigError {
    ZeroBlock,
    CapacityBelowBlock { m: usize, b: usize },
    BlockDoesNotDivide { m: usize, b: usize },
}

impl fmt::Display for CacheConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheConfigError::ZeroBlock => write!(f, "block size B must be >= 1"),
            CacheConfigError::CapacityBelowBlock { m, b } => {
                write!(f, "cache capacity M = {m} must be >= block size B = {b}")
            }
            CacheConfigError::BlockDoesNotDivide { m, b } => {
                write!(f, "block size B = {b} must divide capacity M = {m}")
            }
        }
    }
}

impl std::error::Error for CacheConfigError {}

/// Cache geometry: capacity `M` and block size `B`, both in array elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheConfig {
    m: usize,
    b: usize,
}

impl CacheConfig {
    pub fn new(m: usize, b: usize) -> Result<Self, CacheConfigError> {
        if b == 0 {
            return Err(CacheConfigError::ZeroBlock);
        }
        if m < b {
            return Err(CacheConfigError::CapacityBelowBlock { m, b });
        }
        if !m.is_multiple_of(b) {
            return Err(CacheConfigError::BlockDoesNotDivide { m, b });
        }
        Ok(CacheConfig { m, b })
    }

    pub fn capacity_elements(&self) -> usize {
        self.m
    }

    pub fn block_elements(&self) -> usize {
        self.b
    }

    pub fn capacity_blocks(&self) -> usize {
        self.m / self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    Hit,
    Miss,
}

impl Access {
    pub fn is_miss(self) -> bool {
        matches!(self, Access::Miss)
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    block: usize,
    prev: usize,
    next: usize,
}

const NIL: usize = usize::MAX;

/// Resident block set with LRU ordering plus hit/miss counters.
///
/// Constant-time accesses via a block -> slot map and an intrusive
/// doubly-linked recency list over a fixed slot arena.
#[derive(Debug, Clone)]
pub struct CacheState {
    config: CacheConfig,
    slots: Vec<Node>,
    index: HashMap<usize, usize>,
    head: usize,
    tail: usize,
    len: usize,
    hits: u64,
    misses: u64,
}

/// Counter view of a cache; taking it does not disturb the LRU order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheSnapshot {
    pub misses: u64,
    pub hits: u64,
    pub resident_blocks: Vec<usize>,
}

impl CacheState {
    pub fn new(config: CacheConfig) -> Self {
        let cap = config.capacity_blocks();
        CacheState {
            config,
            slots: Vec::with_capacity(cap),
            index: HashMap::with_capacity(cap * 2),
            head: NIL,
            tail: NIL,
            len: 0,
            hits: 0,
            misses: 0,
        }
    }

    pub fn config(&self) -> CacheConfig {
        self.config
    }

    fn unlink(&mut self, slot: usize) {
        let Node { prev, next, .. } = self.slots[slot];
        if prev != NIL {
            self.slots[prev].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.slots[next].prev = prev;
        } else {
            self.tail = prev;
        }
    }

    fn push_front(&mut self, slot: usize) {
        self.slots[slot].prev = NIL;
        self.slots[slot].next = self.head;
        if self.head != NIL {
            self.slots[self.head].prev = slot;
        } else {
            self.tail = slot;
        }
        self.head = slot;
    }

    /// Access the element at `index`; its block becomes most recently used.
    /// On a miss the least recently used block is evicted if the cache is at
    /// capacity.
    pub fn access(&mut self, index: usize) -> Access {
        let block = index / self.config.b;
        if let Some(&slot) = self.index.get(&block) {
            self.hits += 1;
            if self.head != slot {
                self.unlink(slot);
                self.push_front(slot);
            }
            return Access::Hit;
        }
        self.misses += 1;
        let slot = if self.len < self.config.capacity_blocks() {
            self.len += 1;
            self.slots.push(Node {
                block,
                prev: NIL,
                next: NIL,
            });
            self.slots.len() - 1
        } else {
            let victim = self.tail;
            let old = self.slots[victim].block;
            self.index.remove(&old);
            self.unlink(victim);
            self.slots[victim].block = block;
            victim
        };
        self.index.insert(block, slot);
        self.push_front(slot);
        Access::Miss
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    /// Resident blocks in most-recently-used-first order.
    pub fn snapshot(&self) -> CacheSnapshot {
        let mut resident = Vec::with_capacity(self.len);
        let mut cur = self.head;
        while cur != NIL {
            resident.push(self.slots[cur].block);
            cur = self.slots[cur].next;
        }
        CacheSnapshot {
            misses: self.misses,
            hits: self.hits,
            resident_blocks: resident,
        }
    }
}
