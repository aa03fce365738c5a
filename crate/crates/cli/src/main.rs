//! `qslab` — benchmark and analysis CLI for the quicksort laboratory.

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use qslab_cli::{
    analyze_json_cqs, analyze_json_yqs, compare_algorithms, exact_average_oracle, parse_size,
    rows_to_csv, run_experiment, size_sweep, validate, AlgoConfig, ExperimentSpec,
};
use qslab_core::cachesim::CacheConfig;
use qslab_core::metering::{Aggregate, CostReport};
use qslab_core::theory::{cqs_coefficients, yqs_coefficients};
use qslab_core::tuner::{optimal_t, optimal_tau, Measure};
use qslab_core::{CqsSamplingParam, CqsSortConfig, SamplingParam, SortConfig};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qslab", about = "Dual-pivot quicksort laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sort one seeded random permutation and print the cost report.
    Sort {
        #[arg(long, value_parser = ["yqs", "cqs"], default_value = "yqs")]
        algo: String,
        /// Input size (plain integer or 2^k).
        #[arg(long, value_parser = parse_size)]
        n: u64,
        /// Sampling parameter: T1,T2,T3 for yqs; T1,T2 for cqs.
        #[arg(long, default_value = "1,1,1")]
        t: String,
        /// Insertion sort threshold.
        #[arg(long, default_value_t = 46)]
        w: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Verify and report sortedness explicitly.
        #[arg(long)]
        verify: bool,
        /// Emit the report as JSON instead of the table.
        #[arg(long)]
        json: bool,
        /// Simulated cache capacity in elements (enables the cache model).
        #[arg(long)]
        cache_m: Option<usize>,
        /// Simulated cache block size in elements.
        #[arg(long, default_value_t = 1)]
        cache_b: usize,
    },
    /// Print the leading-term coefficient set of a sampling parameter.
    Analyze {
        /// Dual-pivot parameter T1,T2,T3.
        #[arg(long)]
        t: Option<String>,
        /// Single-pivot parameter T1,T2.
        #[arg(long)]
        cqs: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Find optimal sampling parameters.
    Optimize {
        /// Sample size for the exact discrete search.
        #[arg(long, conflicts_with = "continuous")]
        k: Option<usize>,
        /// Optimize over the continuous simplex instead.
        #[arg(long)]
        continuous: bool,
        #[arg(long, value_parser = ["comparisons", "swaps", "bytecodes", "scanned"])]
        measure: String,
        /// Refinement tolerance for the continuous search.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sweep input sizes, averaging seeded trials, and write the validation
    /// table as CSV.
    Bench {
        #[arg(long, value_parser = ["yqs", "cqs"], default_value = "yqs")]
        algo: String,
        #[arg(long, default_value = "1,1,1")]
        t: String,
        #[arg(long, default_value_t = 46)]
        w: usize,
        #[arg(long, value_parser = parse_size)]
        n_min: u64,
        #[arg(long, value_parser = parse_size)]
        n_max: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        cache_m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        cache_b: usize,
        /// Output CSV path; `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Exact per-measure means over all n! permutations (n <= 9).
    Oracle {
        #[arg(long, value_parser = ["yqs", "cqs"], default_value = "yqs")]
        algo: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "0,0,0")]
        t: String,
        #[arg(long, default_value_t = 2)]
        w: usize,
    },
    /// Leading-term comparison of CQS and YQS at equal sample sizes.
    Compare {
        /// Comma-separated sample sizes (each must be 5 mod 6).
        #[arg(long, default_value = "5,11,17,23")]
        k: String,
    },
}

fn parse_triple(s: &str) -> Result<SamplingParam, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| format!("bad t component '{x}'"))
        })
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a, b, c] => Ok(SamplingParam::new(*a, *b, *c)),
        _ => Err(format!("expected T1,T2,T3, got '{s}'")),
    }
}

fn parse_pair(s: &str) -> Result<CqsSamplingParam, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| format!("bad t component '{x}'"))
        })
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a, b] => Ok(CqsSamplingParam::new(*a, *b)),
        _ => Err(format!("expected T1,T2, got '{s}'")),
    }
}

fn parse_algo(algo: &str, t: &str, w: usize) -> Result<AlgoConfig, String> {
    match algo {
        "yqs" => {
            let t = parse_triple(t)?;
            Ok(AlgoConfig::Yqs(
                SortConfig::new(t, w).map_err(|e| e.to_string())?,
            ))
        }
        "cqs" => {
            let t = parse_pair(t)?;
            Ok(AlgoConfig::Cqs(
                CqsSortConfig::new(t, w).map_err(|e| e.to_string())?,
            ))
        }
        _ => Err(format!("unknown algorithm '{algo}'")),
    }
}

fn parse_cache(m: Option<usize>, b: usize) -> Result<Option<CacheConfig>, String> {
    match m {
        None => Ok(None),
        Some(m) => CacheConfig::new(m, b).map(Some).map_err(|e| e.to_string()),
    }
}

fn print_report(n: u64, report: &CostReport) {
    println!("n = {n}, trials = {}", report.trials);
    println!(
        "{:<14} {:>16} {:>12} {:>14} {:>14} {:>14}",
        "measure", "mean", "stderr", "partition", "insertionsort", "samplesort"
    );
    let print_row = |name: &str, a: &Aggregate| {
        println!(
            "{:<14} {:>16.3} {:>12.3} {:>14.3} {:>14.3} {:>14.3}",
            name, a.mean, a.stderr, a.phase_means[0], a.phase_means[1], a.phase_means[2]
        );
    };
    print_row("comparisons", &report.comparisons);
    print_row("swaps", &report.swaps);
    print_row("writes", &report.writes);
    print_row("scanned", &report.scanned);
    print_row("bytecode", &report.bytecode);
    if let Some(cm) = &report.cache_misses {
        print_row("cache_misses", cm);
    }
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sort {
            algo,
            n,
            t,
            w,
            seed,
            verify,
            json,
            cache_m,
            cache_b,
        } => {
            let algo = parse_algo(&algo, &t, w)?;
            let spec = ExperimentSpec {
                algo,
                ns: vec![n],
                trials: 1,
                seed,
                cache: parse_cache(cache_m, cache_b)?,
            };
            let reports = run_experiment(&spec).map_err(|e| e.to_string())?;
            if json {
                let doc = qslab_cli::report_to_json(n, &reports[0].1);
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                print_report(n, &reports[0].1);
            }
            if verify {
                // run_experiment verifies sortedness after every trial
                println!("verified: output sorted, multiset preserved");
            }
        }
        Command::Analyze { t, cqs, json } => {
            if t.is_none() && cqs.is_none() {
                return Err("analyze needs --t and/or --cqs".into());
            }
            if let Some(t) = t {
                let t = parse_triple(&t)?;
                if json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&analyze_json_yqs(&t)).unwrap()
                    );
                } else {
                    let c = yqs_coefficients::<f64>(&t);
                    println!("yqs t = {t}, k = {}", t.k());
                    println!("  H     = {:.6}", c.h);
                    println!("  a_C   = {:.6}   a_C/H   = {:.6}", c.a_c, c.q_c);
                    println!("  a_S   = {:.6}   a_S/H   = {:.6}", c.a_s, c.q_s);
                    println!("  a_BC  = {:.6}   a_BC/H  = {:.6}", c.a_bc, c.q_bc);
                    println!("  a_SE  = {:.6}   a_SE/H  = {:.6}", c.a_se, c.q_se);
                }
            }
            if let Some(tc) = cqs {
                let tc = parse_pair(&tc)?;
                if json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&analyze_json_cqs(&tc)).unwrap()
                    );
                } else {
                    let c = cqs_coefficients::<f64>(&tc);
                    println!("cqs t = {tc}, k = {}", tc.k());
                    println!("  H     = {:.6}", c.h);
                    println!("  a_C   = {:.6}   a_C/H   = {:.6}", c.a_c, c.q_c);
                    println!("  a_S   = {:.6}   a_S/H   = {:.6}", c.a_s, c.q_s);
                    println!("  a_BC  = {:.6}   a_BC/H  = {:.6}", c.a_bc, c.q_bc);
                    println!("  a_SE  = {:.6}   a_SE/H  = {:.6}", c.a_se, c.q_se);
                }
            }
        }
        Command::Optimize {
            k,
            continuous,
            measure,
            tol,
        } => {
            let measure = Measure::parse(&measure).ok_or("unknown measure")?;
            if continuous {
                let opt = optimal_tau(measure, tol).map_err(|e| e.to_string())?;
                let [a, b, c] = opt.tau;
                println!("measure = {measure}, continuous limit");
                println!("  tau*   = ({a:.6}, {b:.6}, {c:.6})");
                if opt.boundary {
                    println!(
                        "  value  = {} (coefficient; boundary optimum, entropy vanishes)",
                        opt.value
                    );
                    for t in &opt.all_optima {
                        println!("  optimum at ({}, {}, {})", t[0], t[1], t[2]);
                    }
                } else {
                    println!("  value  = {:.6}", opt.value);
                }
            } else {
                let k = k.ok_or("optimize needs --k or --continuous")?;
                let opt = optimal_t(k, measure).map_err(|e| e.to_string())?;
                println!("measure = {measure}, k = {k}");
                println!("  t*     = {}", opt.best);
                println!("  value  = {:.6}", opt.value_f64);
                if opt.all_optima.len() > 1 {
                    let all: Vec<String> = opt.all_optima.iter().map(|t| t.to_string()).collect();
                    println!("  ties   = {}", all.join(" "));
                }
            }
        }
        Command::Bench {
            algo,
            t,
            w,
            n_min,
            n_max,
            trials,
            seed,
            cache_m,
            cache_b,
            out,
        } => {
            let algo = parse_algo(&algo, &t, w)?;
            let spec = ExperimentSpec {
                algo,
                ns: size_sweep(n_min, n_max),
                trials,
                seed,
                cache: parse_cache(cache_m, cache_b)?,
            };
            let rows = validate(&spec).map_err(|e| e.to_string())?;
            let csv = rows_to_csv(&rows);
            if out == "-" {
                print!("{csv}");
            } else {
                std::fs::write(&out, csv).map_err(|e| format!("cannot write {out}: {e}"))?;
                eprintln!("wrote {out}");
            }
        }
        Command::Oracle { algo, n, t, w } => {
            let algo = parse_algo(&algo, &t, w)?;
            let r = exact_average_oracle(&algo, n).map_err(|e| e.to_string())?;
            println!("n = {}, permutations = {}", r.n, r.permutations);
            let line = |name: &str, v: &qslab_core::Rational| {
                println!(
                    "  {:<22} {} = {:.6}",
                    name,
                    v,
                    v.to_f64().unwrap_or(f64::NAN)
                );
            };
            println!("grand totals (exact means):");
            line("comparisons", &r.totals.comparisons);
            line("swaps", &r.totals.swaps);
            line("writes", &r.totals.writes);
            line("scanned", &r.totals.scanned);
            line("bytecode", &r.totals.bytecode);
            println!("partition phase:");
            line("comparisons", &r.partition_phase.comparisons);
            line("swaps", &r.partition_phase.swaps);
            line("scanned", &r.partition_phase.scanned);
            if let Some(fp) = &r.first_partition {
                println!("first partitioning step:");
                line("comparisons", &fp.comparisons);
                line("swaps", &fp.swaps);
                line("scanned", &fp.scanned);
                line("bytecode", &fp.bytecode);
            }
        }
        Command::Compare { k } => {
            let ks: Vec<usize> = k
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| format!("bad k '{x}'")))
                .collect::<Result<_, _>>()?;
            let rows = compare_algorithms(&ks);
            println!("{:<12} {:<14} {:>10} {:>10}", "k", "measure", "cqs", "yqs");
            for r in rows {
                let k = r.k.map_or("no sampling".to_string(), |k| k.to_string());
                if r.representable {
                    println!(
                        "{:<12} {:<14} {:>10.4} {:>10.4}",
                        k, r.measure, r.cqs, r.yqs
                    );
                } else {
                    println!(
                        "{:<12} {:<14} not representable symmetrically",
                        k, r.measure
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
