use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mmafdm_core::codec::{count_patterns, unrank_cap, unrank_map};
use mmafdm_core::modes::{
    min_distances, partition_psk, partition_qam, psk_inter_mode_distance,
    qam_inter_mode_distance, qam_intra_mode_distance, ParentKind,
};
use mmafdm_sim::config::ExperimentConfig;
use mmafdm_sim::csvio::{emit_bound_csv, emit_csv};
use mmafdm_sim::{bound, sweep};

/// Link-level simulation toolkit for multiple-mode index-modulated AFDM.
#[derive(Parser)]
#[command(name = "mmafdm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo BER sweep described by a config file.
    Simulate {
        /// Experiment config (flat key = value text).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate the analytical BER upper bound on the config's SNR grid.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a mode set and its distance figures next to the closed forms.
    Modes {
        /// Number of modes (M).
        #[arg(long = "m")]
        m: usize,
        /// Points per mode (U).
        #[arg(long = "u")]
        u: usize,
        /// Parent constellation family.
        #[arg(long, value_enum)]
        parent: ParentArg,
    },
    /// Dump the activation/arrangement pattern tables for (M, n, k).
    Codebook {
        /// Number of modes (M).
        #[arg(long = "m")]
        m: usize,
        /// Chirps per sub-block (n).
        #[arg(long = "n")]
        n: usize,
        /// Activated modes per sub-block (k).
        #[arg(long = "k")]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParentArg {
    Qam,
    Psk,
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("mmafdm: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, out, seed, workers } => {
            let mut cfg = ExperimentConfig::from_file(&config).map_err(stringify)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(workers) = workers {
                if workers == 0 {
                    return Err("workers must be at least 1".into());
                }
                cfg.workers = workers;
            }
            let result = sweep::run(&cfg).map_err(stringify)?;
            emit_csv(&result, &out).map_err(stringify)?;
            for point in &result.points {
                println!(
                    "snr {:>6.2} dB: ber {:.3e} ({} bit errors / {} frames, {:.1} s)",
                    point.snr_db, point.ber, point.bit_errors, point.frames, point.wall_time_s
                );
            }
            Ok(())
        }
        Command::Bound { config, out } => {
            let cfg = ExperimentConfig::from_file(&config).map_err(stringify)?;
            let rows = bound::run_bound(&cfg).map_err(stringify)?;
            emit_bound_csv(&rows, &out).map_err(stringify)?;
            for row in &rows {
                println!("snr {:>6.2} dB: bound {:.3e}", row.snr_db, row.abep_bound);
            }
            Ok(())
        }
        Command::Modes { m, u, parent } => {
            let set = match parent {
                ParentArg::Qam => partition_qam(m, u),
                ParentArg::Psk => partition_psk(m, u),
            }
            .map_err(stringify)?;
            println!("mode point          re          im");
            for mode in 0..set.num_modes() {
                for (idx, p) in set.mode(mode).iter().enumerate() {
                    println!("{:>4} {:>5} {:>11.6} {:>11.6}", mode + 1, idx, p.re, p.im);
                }
            }
            let (miad, mird) = min_distances(&set);
            println!();
            println!(
                "energy scale {:.9} (multiply to recover parent-grid coordinates)",
                set.energy_scale()
            );
            println!("measured  miad = {miad:.9}, mird = {mird:.9}");
            match set.parent() {
                ParentKind::Psk => {
                    println!("closed-form mird = {:.9}", psk_inter_mode_distance(m, u));
                }
                ParentKind::Qam => {
                    println!(
                        "closed-form mird = {:.9}, miad target = {:.9}",
                        qam_inter_mode_distance(m, u),
                        qam_intra_mode_distance(m, u)
                    );
                }
            }
            Ok(())
        }
        Command::Codebook { m, n, k } => {
            let (n_map, n_cap, b1) = count_patterns(m, n, k).map_err(stringify)?;
            println!("patterns: {n_map} activation x {n_cap} arrangement, {b1} index bits");
            println!();
            println!("i_map  modes");
            for i in 0..n_map {
                let map = unrank_map(i, m, k).map_err(stringify)?;
                let names: Vec<String> = map.iter().map(|&mode| format!("M{}", mode + 1)).collect();
                println!("{:>5}  [{}]", i, names.join(", "));
            }
            println!();
            println!("i_cap  arrangement");
            for i in 0..n_cap {
                let cap = unrank_cap(i, n, k).map_err(stringify)?;
                let mut seen = vec![0usize; k];
                let slots: Vec<String> = cap
                    .iter()
                    .map(|&j| {
                        seen[j] += 1;
                        format!("S{}({})", j + 1, seen[j])
                    })
                    .collect();
                println!("{:>5}  [{}]", i, slots.join(", "));
            }
            Ok(())
        }
    }
}

fn stringify<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}
