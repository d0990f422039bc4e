// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use qcnn::bench::{self, csvio, Command, CsvSchema, Envelope, RunConfig, SampleComplexityQuery};
use qcnn::heisenberg::multiscale_sop_at;
use qcnn::qec::optimize::RestartOutcome;
use qcnn::qec::{error_rate_curve, optimize, EncoderDecoder, QecOptConfig, QecReport};
use qcnn::train::{self, QcnnHyperparams, TrainConfig, TrainedModel};
use qcnn::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qcnn", version, about = "QCNN experiments: sweeps, training, error-correction search, verification")]
struct Cli {
    /// TOML run configuration; every field has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory (also settable through QCNN_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest register simulated as a state vector.
    #[arg(long, global = true)]
    cap_qubits: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify ground states over an (h1, h2) grid.
    PhaseSweep {
        /// Trained model file; the exact circuit when absent.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Train the phase-recognition circuit on a line of ground states.
    TrainQpr {
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Search encoder/decoder unitaries for the configured noise.
    TrainQec,
    /// Logical error rate against total physical rate.
    QecCurve {
        /// Code written by train-qec; trained on the spot when absent.
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Expand the exact circuit's readout into Pauli strings.
    SopExpand {
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        site: Option<usize>,
    },
    /// Minimum copies to decide p against p0, or the line comparison.
    SampleComplexity {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        p0: Option<f64>,
    },
    /// Multi-qubit operation counts.
    ResourceCount {
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run the invariant suite; exits 2 on any failure.
    Verify {
        /// Only checks whose name contains this text.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct QecArtifact {
    code: EncoderDecoder,
    report: QecReport,
    restarts: Vec<RestartOutcome>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(bench::exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    apply_overrides(&mut cfg, &cli);
    cfg.validate()?;
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let out = cfg.out_dir();
    std::fs::create_dir_all(&out)?;
    match cfg.command.expect("set from the subcommand") {
        Command::PhaseSweep => phase_sweep(&cfg, &out),
        Command::TrainQpr => train_qpr(&cfg, &out),
        Command::TrainQec => train_qec(&cfg, &out).map(|_| 0),
        Command::QecCurve => qec_curve(&cfg, &out),
        Command::SopExpand => sop_expand(&cfg, &out),
        Command::SampleComplexity => sample_complexity(&cfg, &out),
        Command::ResourceCount => resource_count(&cfg, &out),
        Command::Verify => verify(&cfg, &out, cli_only(&cli.command)),
    }
}

fn cli_only(c: &Cmd) -> Option<String> {
    match c {
        Cmd::Verify { only } => only.clone(),
        _ => None,
    }
}

fn apply_overrides(cfg: &mut RunConfig, cli: &Cli) {
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(c) = cli.cap_qubits {
        cfg.cap_qubits = c;
    }
    cfg.command = Some(match &cli.command {
        Cmd::PhaseSweep { model } => {
            if model.is_some() {
                cfg.sweep.model = model.clone();
            }
            Command::PhaseSweep
        }
        Cmd::TrainQpr { restarts, budget } => {
            if let Some(r) = restarts {
                cfg.train.restarts = *r;
            }
            if let Some(b) = budget {
                cfg.train.driver.max_iter = *b;
            }
            Command::TrainQpr
        }
        Cmd::TrainQec => Command::TrainQec,
        Cmd::QecCurve { code } => {
            if code.is_some() {
                cfg.qec.code = code.clone();
            }
            Command::QecCurve
        }
        Cmd::SopExpand { qubits, depth, site } => {
            cfg.circuit.qubits = qubits.unwrap_or(cfg.circuit.qubits);
            cfg.circuit.depth = depth.unwrap_or(cfg.circuit.depth);
            if site.is_some() {
                cfg.sop.site = *site;
            }
            Command::SopExpand
        }
        Cmd::SampleComplexity { p, p0 } => {
            if p.is_some() {
                cfg.complexity.p = *p;
            }
            cfg.complexity.p0 = p0.unwrap_or(cfg.complexity.p0);
            Command::SampleComplexity
        }
        Cmd::ResourceCount { qubits, depth } => {
            cfg.circuit.qubits = qubits.unwrap_or(cfg.circuit.qubits);
            cfg.circuit.depth = depth.unwrap_or(cfg.circuit.depth);
            Command::ResourceCount
        }
        Cmd::Verify { .. } => Command::Verify,
    });
}

fn check_cap(cfg: &RunConfig) -> Result<()> {
    let n = cfg.circuit.qubits;
    if n > cfg.cap_qubits {
        return Err(Error::CapExceeded { dim: n, cap: cfg.cap_qubits });
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, cfg: &RunConfig, body: T) -> Result<()> {
    let env = Envelope { metadata: cfg.metadata(), body };
    std::fs::write(path, serde_json::to_string_pretty(&env)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_csv(path: &Path, cfg: &RunConfig, schema: &CsvSchema, rows: &[Vec<String>]) -> Result<()> {
    csvio::write_table_file(path, Some(&cfg.metadata()), schema, rows)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn phase_sweep(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let s = &cfg.sweep;
    let grid = train::grid((s.h1.0, s.h1.1, s.h1.2), (s.h2.0, s.h2.1, s.h2.2));
    let rows = match &s.model {
        Some(path) => {
            let circuit = TrainedModel::load(path)?.circuit()?;
            if circuit.hyperparams.num_qubits > cfg.cap_qubits {
                return Err(Error::CapExceeded { dim: circuit.hyperparams.num_qubits, cap: cfg.cap_qubits });
            }
            train::phase_sweep(&circuit, &grid, cfg.seed)
        }
        None => {
            check_cap(cfg)?;
            bench::exact_sweep(cfg.circuit.qubits, cfg.circuit.depth, &grid, cfg.seed)?
        }
    };
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    write_csv(&out.join("sweep.csv"), cfg, &CsvSchema::sweep(), &csvio::sweep_rows(&rows))?;
    if failed > 0 {
        eprintln!("{failed} of {} points failed; see the error column", rows.len());
        return Ok(3);
    }
    Ok(0)
}

fn train_qpr(cfg: &RunConfig, out: &Path) -> Result<u8> {
    check_cap(cfg)?;
    let c = &cfg.circuit;
    let h = QcnnHyperparams::new(c.block, c.depth, c.qubits)?;
    let t = &cfg.train;
    let data = train::generate_training_set(c.qubits, t.points, &t.line, cfg.seed)?;
    write_csv(&out.join("training_set.csv"), cfg, &CsvSchema::training_set(), &csvio::training_set_rows(&data))?;
    println!("{} parameters, {} samples, {} restarts", h.num_params(), data.len(), t.restarts);
    let mut best: Option<TrainedModel> = None;
    for r in 0..t.restarts as u64 {
        let seed = cfg.seed.wrapping_add(r);
        let (circuit, hist) = train::train(&h, &data, &TrainConfig { driver: t.driver.clone(), seed })?;
        let m = TrainedModel::new(&circuit, seed, hist);
        println!("restart {r}: seed {seed}, final MSE {:.6}, {} steps", m.final_mse, m.history.steps.len());
        if best.as_ref().is_none_or(|b| m.final_mse < b.final_mse) {
            best = Some(m);
        }
    }
    let best = best.expect("at least one restart");
    write_csv(&out.join("history.csv"), cfg, &CsvSchema::history(), &csvio::history_rows(&best.history))?;
    write_json(&out.join("model.json"), cfg, &best)?;
    Ok(0)
}

fn qec_config(cfg: &RunConfig) -> QecOptConfig {
    let mut q = QecOptConfig { restarts: cfg.qec.restarts, seed: cfg.seed, ..QecOptConfig::default() };
    q.driver.max_iter = cfg.qec.max_iter;
    q
}

fn train_qec(cfg: &RunConfig, out: &Path) -> Result<EncoderDecoder> {
    let em = cfg.qec.error_model()?;
    let (code, report, restarts) = optimize(&em, &qec_config(cfg))?;
    println!(
        "logical rate {:.4e} (Shor {:.4e}, identity {:.4e})",
        report.logical_error_rate, report.shor_rate, report.identity_rate
    );
    write_json(&out.join("qec_code.json"), cfg, QecArtifact { code: code.clone(), report, restarts })?;
    Ok(code)
}

fn qec_curve(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let code = match &cfg.qec.code {
        Some(p) => serde_json::from_str::<QecArtifact>(&std::fs::read_to_string(p)?)?.code,
        None => train_qec(cfg, out)?,
    };
    let pts = error_rate_curve(&code, &cfg.qec.error_model()?, &cfg.qec.totals)?;
    for p in &pts {
        println!("total {:.3e}: learned {:.4e}, identity {:.4e}, Shor {:.4e}", p.total_rate, p.learned, p.identity, p.shor);
    }
    write_csv(&out.join("qec_curve.csv"), cfg, &CsvSchema::qec_curve(), &csvio::curve_rows(&pts))?;
    Ok(0)
}

fn sop_expand(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let c = &cfg.circuit;
    let width = qcnn::exact::final_width(c.qubits, c.depth)?;
    let o = multiscale_sop_at(c.qubits, c.depth, cfg.sop.site.unwrap_or(width / 2))?;
    println!("{} terms; per-scale term counts {:?}", o.operator.len(), o.term_counts);
    let rows: Vec<Vec<String>> = o.csv_rows().into_iter().map(|(p, c, e)| vec![p, c.to_string(), e]).collect();
    write_csv(&out.join("sop.csv"), cfg, &CsvSchema::sop_expand(), &rows)?;
    Ok(0)
}

fn sample_complexity(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let x = &cfg.complexity;
    if let Some(p) = x.p {
        let m = bench::sample_complexity(&SampleComplexityQuery { p, p0: x.p0 })?;
        println!("M_min = {}", bench::format_m_min(m));
        let rows = vec![vec![p.to_string(), x.p0.to_string(), csvio::cell(m)]];
        write_csv(&out.join("sample_complexity.csv"), cfg, &CsvSchema::sample_complexity(), &rows)?;
        return Ok(0);
    }
    check_cap(cfg)?;
    let n = cfg.circuit.qubits;
    let lens = if x.sop_lengths.is_empty() { vec![n / 2] } else { x.sop_lengths.clone() };
    let rows = bench::compare_complexity(n, cfg.circuit.depth, &x.line, x.points, &lens, cfg.seed)?;
    let used: Vec<usize> = rows.first().map(|r| r.sops.iter().map(|s| s.len).collect()).unwrap_or_default();
    write_csv(&out.join("complexity.csv"), cfg, &CsvSchema::complexity(&used), &csvio::complexity_rows(&rows))?;
    Ok(if rows.iter().any(|r| r.error.is_some()) { 3 } else { 0 })
}

fn resource_count(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let r = bench::resource_count(cfg.circuit.qubits, cfg.circuit.depth)?;
    println!(
        "N={}, d={}: {} multi-qubit operations, single-qubit depth {}",
        r.n, r.d, r.multi_qubit_ops, r.single_qubit_depth
    );
    write_csv(&out.join("resources.csv"), cfg, &CsvSchema::resources(), &csvio::resource_rows(&r))?;
    Ok(0)
}

fn verify(cfg: &RunConfig, out: &Path, only: Option<String>) -> Result<u8> {
    let report = bench::verify::run_selected(cfg.seed, |name| only.as_deref().is_none_or(|o| name.contains(o)));
    for c in &report.checks {
        println!("{} {} ({:.2} s): {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.seconds, c.detail);
    }
    write_json(&out.join("verify.json"), cfg, &report)?;
    Ok(if report.passed() { 0 } else { 2 })
}
