use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anosov_core::distinguisher::{distinguish, proven_pairs, Certificate};
use anosov_core::gluing::{locate_periodic_orbit, CrossingModel, GluingMap};
use anosov_core::handedness::{extendable_to_even, old_handedness, SAAnnulus};
use anosov_core::homology::NewLozengeData;
use anosov_core::orbit_space::{adjacency_list, classify_maximal, extended_fan, AdjacencyList, Classification};
use anosov_core::{build_plug, Handedness};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::svg::{render, PlotOptions};

/// Write `bytes` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e| CliError::Io(path.to_path_buf(), e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn emit(cfg: &RunConfig, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn crossing_model(cfg: &RunConfig) -> Result<CrossingModel, CliError> {
    Ok(match cfg.mu {
        Some(mu) => CrossingModel::with_mu(mu)?,
        None => CrossingModel::default(),
    })
}

pub fn plug(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = build_plug(cfg.require_n()?)?;
    emit(cfg, out, &to_json(&spec)?)
}

#[derive(Serialize)]
struct InvariantRow {
    i: u32,
    cluster_size: u32,
    handedness: Vec<Handedness>,
    /// Whether `Σ_i` extends to an even SA annulus, per `m`.
    extends_to_even: Vec<bool>,
}

#[derive(Serialize)]
struct InvariantTable {
    n: u32,
    k: i64,
    rows: Vec<InvariantRow>,
}

pub fn invariants(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let n = cfg.require_n()?;
    let k = cfg.require_k()?;
    let mut rows = Vec::new();
    for i in 1..=4 * n {
        let mut handedness = Vec::new();
        let mut extends_to_even = Vec::new();
        for m in 0..=2 * n {
            handedness.push(old_handedness(n, i, m)?);
            extends_to_even.push(extendable_to_even(&SAAnnulus::old(n, i, m)?, k)?.is_yes());
        }
        rows.push(InvariantRow {
            i,
            cluster_size: 4 * i + 3,
            handedness,
            extends_to_even,
        });
    }
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&InvariantTable { n, k, rows })?,
        Format::Csv => {
            let mut s = String::from("i,cluster_size");
            for m in 0..=2 * n {
                let _ = write!(s, ",m={m}");
            }
            s.push('\n');
            for r in &rows {
                let _ = write!(s, "{},{}", r.i, r.cluster_size);
                for h in &r.handedness {
                    let _ = write!(s, ",{h}");
                }
                s.push('\n');
            }
            s
        }
    };
    emit(cfg, out, &text)
}

fn requested_pairs(cfg: &RunConfig, n: u32) -> Result<Vec<(u32, u32)>, CliError> {
    if let Some(pairs) = &cfg.pairs {
        return Ok(pairs.clone());
    }
    match (cfg.m1, cfg.m2) {
        (Some(a), Some(b)) => Ok(vec![(a, b)]),
        (None, None) => Ok(proven_pairs(n)),
        _ => Err(CliError::Usage("--m1 and --m2 must be given together".into())),
    }
}

pub fn distinguish_pairs(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let n = cfg.require_n()?;
    let k = cfg.require_k()?;
    let pairs = requested_pairs(cfg, n)?;
    let mut certificates: Vec<Certificate> = Vec::new();
    for &(a, b) in &pairs {
        GluingMap::new(n, a)?;
        GluingMap::new(n, b)?;
        certificates.push(distinguish(n, a, b, k)?);
    }
    for c in &certificates {
        if !c.verify()? {
            return Err(CliError::Internal(format!(
                "certificate for ({}, {}) does not re-verify",
                c.pair.m1, c.pair.m2
            )));
        }
    }
    match &cfg.out {
        Some(dir) => {
            for c in &certificates {
                let path = dir.join(format!("pair_{}_{}.json", c.pair.m1, c.pair.m2));
                write_atomic(&path, to_json(c)?.as_bytes())?;
            }
            let mut summary = String::new();
            for c in &certificates {
                let verdict = if c.is_inequivalent() { "inequivalent" } else { "inconclusive" };
                let _ = writeln!(summary, "({}, {}) {verdict}", c.pair.m1, c.pair.m2);
            }
            out.write_all(summary.as_bytes())
                .map_err(|e| CliError::Io("<stdout>".into(), e))?;
        }
        None if certificates.is_empty() => {}
        None => emit(cfg, out, &to_json(&certificates)?)?,
    }
    let missed: Vec<String> = certificates
        .iter()
        .filter(|c| !c.is_inequivalent() && (1..2 * n).contains(&c.pair.m1) && (1..2 * n).contains(&c.pair.m2))
        .map(|c| format!("({}, {})", c.pair.m1, c.pair.m2))
        .collect();
    if !missed.is_empty() {
        return Err(CliError::Mismatch(format!("pairs not refuted: {}", missed.join(", "))));
    }
    Ok(())
}

pub fn plot(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let i = cfg.require_i()?;
    if i == 0 {
        return Err(CliError::Usage("--i must be at least 1".into()));
    }
    let mut opts = PlotOptions::default();
    if let Some(l) = cfg.leaves {
        opts.leaves_per_annulus = l;
    }
    if let Some(s) = cfg.samples {
        opts.samples = s.max(2);
    }
    if let (Some(n), Some(m)) = (cfg.n, cfg.m) {
        let model = crossing_model(cfg)?;
        let orbit = locate_periodic_orbit(&model, n, m, i.div_ceil(2), 0)?;
        opts.marks.push(orbit.points[((i + 1) % 2) as usize]);
    }
    emit(cfg, out, &render(i, &opts))
}

#[derive(Serialize)]
struct OrbitSpaceReport {
    i: u32,
    k: i64,
    classification: Classification,
    adjacency: AdjacencyList,
}

pub fn orbit_space(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let i = cfg.require_i()?;
    let k = cfg.require_k()?;
    let n = cfg.n.unwrap_or(i.div_ceil(4).max(1));
    let data = NewLozengeData::unit(i.div_ceil(2), n)?;
    let fan = extended_fan(i, cfg.u_end, cfg.s_end, &data)?;
    let report = OrbitSpaceReport {
        i,
        k,
        classification: classify_maximal(&fan.lozenges, k)?,
        adjacency: adjacency_list(&fan.lozenges),
    };
    emit(cfg, out, &to_json(&report)?)
}
