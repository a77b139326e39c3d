use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::json;

use super::config::{Command, ExperimentConfig, Format};
use super::output::{check_normalized, format_f64, to_json, with_suffix, write_file, CsvTable};
use super::CliError;
use crate::ctqw::{ctqw_time_average, ctqw_time_average_finite};
use crate::scaling::{ks_distance, theorem1_experiment, StepCDF};
use crate::szegedy::{
    dtqw_time_average, dtqw_time_average_checkpoints, eigenpairs_to_json, lifted_eigenpairs,
    SzegedyOperator,
};
use crate::{BDChain, SpectralData};

/// Upper bound on `steps * 2(n+1)` for `trace` without `--force`.
pub const TRACE_UPDATE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
    /// Sweep rows that failed; the table is still written.
    pub failed_rows: usize,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let mut out = Writer {
        config,
        files: Vec::new(),
        summary: String::new(),
    };
    let failed_rows = match config.command {
        Command::Spectrum => spectrum(&mut out)?,
        Command::CtqwAvg => ctqw_avg(&mut out)?,
        Command::DtqwAvg => dtqw_avg(&mut out)?,
        Command::Trace => trace(&mut out)?,
        Command::Theorem1 => theorem1(&mut out)?,
    };
    Ok(RunOutcome {
        files: out.files,
        summary: out.summary,
        failed_rows,
    })
}

struct Writer<'a> {
    config: &'a ExperimentConfig,
    files: Vec<PathBuf>,
    summary: String,
}

impl Writer<'_> {
    fn emit(&mut self, suffix: &str, contents: &str) -> Result<(), CliError> {
        let path = with_suffix(&self.config.output, suffix);
        write_file(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    fn emit_main(
        &mut self,
        csv: impl FnOnce() -> String,
        json: impl FnOnce() -> String,
    ) -> Result<(), CliError> {
        match self.config.format {
            Format::Csv => self.emit(".csv", &csv()),
            Format::Json => self.emit(".json", &json()),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.summary.push_str(text.as_ref());
        self.summary.push('\n');
    }

    fn chain_and_spectrum(&mut self) -> Result<(BDChain, SpectralData), CliError> {
        let n = self.config.n();
        let chain = self
            .config
            .family
            .build(n)
            .map_err(|e| CliError::MalformedChain(e.to_string()))?;
        let spec = SpectralData::from_chain(&chain)?;
        self.line(format!("family = {}, n = {n}", self.config.family.label()));
        self.line(format!(
            "spectral gap 1 - lambda_1 = {}",
            format_f64(spec.spectral_gap())
        ));
        if self.config.dump_spectrum && self.config.command != Command::Spectrum {
            self.emit(".spectrum.json", &to_json(&spec))?;
        }
        Ok((chain, spec))
    }
}

fn spectrum(out: &mut Writer) -> Result<usize, CliError> {
    let (_, spec) = out.chain_and_spectrum()?;
    check_normalized(
        "v_0^2",
        &spec.vector(0).iter().map(|v| v * v).collect::<Vec<_>>(),
    )?;
    let family = out.config.family.label();
    out.emit_main(
        || {
            let mut t = CsvTable::new(&["l".into(), "eigenvalue".into()]);
            for (l, lam) in spec.eigenvalues.iter().enumerate() {
                t.row(&[l.to_string(), format_f64(*lam)]);
            }
            t.into_string()
        },
        || {
            to_json(&json!({
                "family": family,
                "n": spec.n(),
                "spectral_gap": spec.spectral_gap(),
                "eigenvalues": spec.eigenvalues,
                "eigenvectors": spec.eigenvectors,
            }))
        },
    )?;
    if out.config.dump_spectrum {
        out.emit(".spectrum.json", &to_json(&spec))?;
    }
    let shown: Vec<String> = spec
        .eigenvalues
        .iter()
        .take(6)
        .map(|l| format_f64(*l))
        .collect();
    out.line(format!(
        "eigenvalues: {}{}",
        shown.join(", "),
        if spec.dim() > 6 { ", ..." } else { "" }
    ));
    Ok(0)
}

fn ctqw_avg(out: &mut Writer) -> Result<usize, CliError> {
    let (_, spec) = out.chain_and_spectrum()?;
    let closed = ctqw_time_average(&spec);
    check_normalized("pbar_C", &closed.probs)?;
    let finite = out
        .config
        .horizons
        .iter()
        .map(|&h| ctqw_time_average_finite(&spec, h))
        .collect::<Result<Vec<_>, _>>()?;
    for f in &finite {
        check_normalized(
            &format!("pbar_C_T{}", format_f64(f.horizon.unwrap_or(0.0))),
            &f.probs,
        )?;
    }
    out.line(format!("sum pbar_C - 1 = {:e}", closed.total() - 1.0));
    for f in &finite {
        out.line(format!(
            "T = {}: sup |pbar_C(T) - pbar_C| = {:e}",
            format_f64(f.horizon.unwrap_or(0.0)),
            f.sup_distance(&closed)?
        ));
    }
    let family = out.config.family.label();
    out.emit_main(
        || {
            let mut header = vec!["j".to_string(), "pbar_C".to_string()];
            header.extend(finite.iter().map(|f| format!("pbar_C_T{}", format_f64(f.horizon.unwrap_or(0.0)))));
            let mut t = CsvTable::new(&header);
            for j in 0..closed.probs.len() {
                let mut row = vec![j.to_string(), format_f64(closed.probs[j])];
                row.extend(finite.iter().map(|f| format_f64(f.probs[j])));
                t.row(&row);
            }
            t.into_string()
        },
        || {
            to_json(&json!({
                "family": family,
                "n": spec.n(),
                "pbar_C": closed.probs,
                "finite": finite.iter().map(|f| json!({"T": f.horizon, "probs": f.probs})).collect::<Vec<_>>(),
            }))
        },
    )?;
    Ok(0)
}

fn integer_horizons(horizons: &[f64]) -> Result<Vec<usize>, CliError> {
    horizons
        .iter()
        .map(|&h| {
            if h.fract() == 0.0 && h >= 1.0 && h <= usize::MAX as f64 {
                Ok(h as usize)
            } else {
                Err(CliError::Config(format!(
                    "DTQW horizons must be positive integers, got {h}"
                )))
            }
        })
        .collect()
}

fn dtqw_avg(out: &mut Writer) -> Result<usize, CliError> {
    let (chain, spec) = out.chain_and_spectrum()?;
    let closed = dtqw_time_average(&chain, &spec)?;
    check_normalized("pbar_D", &closed.probs)?;
    let horizons = integer_horizons(&out.config.horizons)?;
    let op = SzegedyOperator::new(&chain);
    let empirical = if horizons.is_empty() {
        Vec::new()
    } else {
        dtqw_time_average_checkpoints(&op, &horizons)?
    };
    for (e, h) in empirical.iter().zip(&horizons) {
        check_normalized(&format!("pbar_D_T{h}"), &e.probs)?;
    }

    let ctqw = ctqw_time_average(&spec);
    let ks = ks_distance(&StepCDF::from_dist(&ctqw), &StepCDF::from_dist(&closed))?;
    out.line(format!("sum pbar_D - 1 = {:e}", closed.total() - 1.0));
    out.line(format!(
        "Kolmogorov distance F_C vs F_D = {}",
        format_f64(ks)
    ));
    for (e, h) in empirical.iter().zip(&horizons) {
        out.line(format!(
            "T = {h}: sup |empirical - closed| = {:e}",
            e.sup_distance(&closed)?
        ));
    }

    if out.config.dump_eigenpairs {
        let pairs = lifted_eigenpairs(&chain, &spec)?;
        let value = eigenpairs_to_json(&pairs).map_err(|e| CliError::Config(e.to_string()))?;
        out.emit(".eigenpairs.json", &to_json(&value))?;
    }

    let family = out.config.family.label();
    out.emit_main(
        || {
            let mut header = vec!["j".to_string(), "pbar_D".to_string()];
            header.extend(horizons.iter().map(|h| format!("pbar_D_T{h}")));
            let mut t = CsvTable::new(&header);
            for j in 0..closed.probs.len() {
                let mut row = vec![j.to_string(), format_f64(closed.probs[j])];
                row.extend(empirical.iter().map(|e| format_f64(e.probs[j])));
                t.row(&row);
            }
            t.into_string()
        },
        || {
            to_json(&json!({
                "family": family,
                "n": spec.n(),
                "pbar_D": closed.probs,
                "empirical": empirical.iter().zip(&horizons).map(|(e, h)| json!({"T": h, "probs": e.probs})).collect::<Vec<_>>(),
            }))
        },
    )?;
    Ok(0)
}

fn trace(out: &mut Writer) -> Result<usize, CliError> {
    let steps = match (out.config.steps, out.config.horizons.first()) {
        (Some(s), _) => s,
        (None, Some(&h)) => integer_horizons(&[h])?[0],
        (None, None) => return Err(CliError::Config("trace needs --steps".into())),
    };
    let n = out.config.n();
    let updates = steps as u128 * 2 * (n as u128 + 1);
    if updates > TRACE_UPDATE_LIMIT && !out.config.force {
        return Err(CliError::TraceTooLarge {
            steps,
            n,
            updates,
            limit: TRACE_UPDATE_LIMIT,
        });
    }
    let (chain, _) = out.chain_and_spectrum()?;
    let op = SzegedyOperator::new(&chain);
    let rows: Vec<Vec<f64>> = op.evolution().take(steps).collect();
    for (t, probs) in rows.iter().enumerate() {
        check_normalized(&format!("trace t={t}"), probs)?;
    }
    out.line(format!("recorded {steps} steps"));
    let family = out.config.family.label();
    out.emit_main(
        || {
            let mut t = CsvTable::new(&["t".into(), "j".into(), "prob".into()]);
            for (step, probs) in rows.iter().enumerate() {
                for (j, p) in probs.iter().enumerate() {
                    t.row(&[step.to_string(), j.to_string(), format_f64(*p)]);
                }
            }
            t.into_string()
        },
        || to_json(&json!({"family": family, "n": n, "steps": steps, "distributions": rows})),
    )?;
    Ok(0)
}

fn theorem1(out: &mut Writer) -> Result<usize, CliError> {
    let reference = out.config.reference;
    let ref_fn = reference.map(|r| move |x: f64| r.cdf(x));
    let report = theorem1_experiment(
        &out.config.family,
        &out.config.sizes,
        ref_fn.as_ref().map(|f| f as &(dyn Fn(f64) -> f64 + Sync)),
    );
    let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();

    out.line(format!("family = {}", report.family));
    let mut summary = String::new();
    for row in &report.rows {
        match &row.error {
            None => {
                let _ = writeln!(
                    summary,
                    "n = {}: gap = {}, ks_cd = {}{}",
                    row.n,
                    opt(row.gap),
                    opt(row.ks_cd),
                    row.ks_ref
                        .map(|k| format!(", ks_ref = {}", format_f64(k)))
                        .unwrap_or_default()
                );
            }
            Some(e) => {
                let _ = writeln!(summary, "n = {}: FAILED ({e})", row.n);
            }
        }
    }
    out.summary.push_str(&summary);

    out.emit_main(
        || {
            let mut t = CsvTable::new(&[
                "family".into(),
                "n".into(),
                "gap".into(),
                "ks_cd".into(),
                "ks_ref".into(),
            ]);
            for row in &report.rows {
                t.row(&[
                    report.family.clone(),
                    row.n.to_string(),
                    opt(row.gap),
                    opt(row.ks_cd),
                    opt(row.ks_ref),
                ]);
            }
            t.into_string()
        },
        || to_json(&report),
    )?;
    Ok(report.failures().count())
}
