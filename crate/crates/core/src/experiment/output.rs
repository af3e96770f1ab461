use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::EnergyReport;
use crate::error::Result;
use crate::influence::FrontRecord;
use crate::model::Geometry1D;
use crate::steady::{DecayVerdict, SteadyAmplitude};
use crate::transient::Snapshot;

/// Every number goes out with 17 significant digits.
pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 24);
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&num(*v));
    }
    s.push('\n');
    s
}

pub(crate) fn write_csv(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<PathBuf> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&row(&r));
    }
    fs::write(path, out)?;
    Ok(path.to_path_buf())
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

/// `t,x,T,q,v` for every snapshot.
pub fn write_snapshots(path: &Path, geom: &Geometry1D, snaps: &[Snapshot]) -> Result<PathBuf> {
    let xs = geom.nodes();
    write_csv(
        path,
        "t,x,T,q,v",
        snaps.iter().flat_map(|s| {
            xs.iter()
                .enumerate()
                .map(move |(j, &x)| vec![s.t, x, s.temp[j], s.flux[j], s.rate[j]])
        }),
    )
}

/// `t,E,F,residual,bound,g_cum`; `bound` is the regime's estimate or NaN.
pub fn write_energy(path: &Path, r: &EnergyReport) -> Result<PathBuf> {
    let bound = r.bound_stable.as_ref().or(r.bound_growth.as_ref());
    write_csv(
        path,
        "t,E,F,residual,bound,g_cum",
        (0..r.times.len()).map(|i| {
            vec![
                r.times[i],
                r.energy[i],
                r.energy_f[i],
                r.conservation_residual[i],
                bound.map_or(f64::NAN, |b| b[i]),
                r.g_cum[i],
            ]
        }),
    )
}

/// `t,front_position,c0_t_or_c1_t`.
pub fn write_front(path: &Path, f: &FrontRecord) -> Result<PathBuf> {
    let c = f.c_bound();
    write_csv(
        path,
        "t,front_position,c0_t_or_c1_t",
        f.times
            .iter()
            .zip(&f.front_position)
            .map(|(&t, &x)| vec![t, x, c * t]),
    )
}

/// `x3,M,envelope,Mstar`; envelope and lower measure are NaN when uncertified.
pub fn write_decay(
    path: &Path,
    x3: &[f64],
    measure: &[f64],
    verdict: Option<&DecayVerdict>,
) -> Result<PathBuf> {
    write_csv(
        path,
        "x3,M,envelope,Mstar",
        (0..x3.len()).map(|j| {
            let (env, low) = verdict.map_or((f64::NAN, f64::NAN), |v| (v.envelope[j], v.lower[j]));
            vec![x3[j], measure[j], env, low]
        }),
    )
}

/// `x1,x3,Re(theta),Im(theta)`.
pub fn write_amplitude(path: &Path, sol: &SteadyAmplitude) -> Result<PathBuf> {
    let g = &sol.geometry;
    write_csv(
        path,
        "x1,x3,Re(theta),Im(theta)",
        (0..g.nx3()).flat_map(|j3| {
            (0..g.nx1()).map(move |j1| {
                let z = sol.theta_at(j1, j3);
                vec![g.x1(j1), g.x3(j3), z.re, z.im]
            })
        }),
    )
}

/// Plain-text summary lines, one per check, plus free-form notes.
pub(crate) fn summary_text(title: &str, lines: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "{}", "=".repeat(title.chars().count()));
    for l in lines {
        let _ = writeln!(s, "{l}");
    }
    s
}
