//! Parameter grids over `(gamma, phi, k)` and their flat-file output.
//!
//! Grid points are evaluated in parallel and written in lexicographic order
//! (`gamma` outermost, `k` innermost) by a single writer, so output bytes do
//! not depend on the thread count. `ABRING_THREADS` sets the pool size.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{derived_quantities, ModelParams};
use crate::scattering::{det_transfer, max_phase_shift, scattering_amplitudes};

pub const THREADS_ENV: &str = "ABRING_THREADS";

pub const CSV_HEADER: &str =
    "gamma,phi,k,re_t,im_t,abs_t,arg_t,re_r,im_r,abs_r,arg_r,det_m_re,det_m_im,chi_abs,flag";

pub const SHIFT_CSV_HEADER: &str = "gamma,k,delta_omega";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    Amplitudes,
    PhaseProfile,
    MaxPhaseShift,
    DetM,
    Chi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One axis of the grid: a fixed value or `lo:hi:count` with inclusive ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Fixed(f64),
    Range { lo: f64, hi: f64, count: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(x) => vec![x],
            Axis::Range { lo, hi, count } => {
                let step = (hi - lo) / (count - 1) as f64;
                (0..count).map(|i| if i == count - 1 { hi } else { lo + step * i as f64 }).collect()
            }
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Axis::Range { .. })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().map_err(|_| Error::Config(format!("not a number: {t:?}")))?;
            if !v.is_finite() {
                return Err(Error::Config(format!("axis value must be finite, got {t:?}")));
            }
            Ok(v)
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Axis::Fixed(num(x)?)),
            [lo, hi, count] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("grid size must be an integer in {s:?}")))?;
                if count < 2 {
                    return Err(Error::Config(format!("swept axis needs at least 2 points, got {count}")));
                }
                if !(lo < hi) {
                    return Err(Error::Config(format!("range {s:?} needs lo < hi")));
                }
                Ok(Axis::Range { lo, hi, count })
            }
            _ => Err(Error::Config(format!("malformed range {s:?}; expected a number or lo:hi:count"))),
        }
    }
}

/// Axis as written in a config file: a bare number or a range string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Value(f64),
    Text(String),
}

impl AxisSpec {
    fn resolve(&self) -> Result<Axis> {
        match self {
            AxisSpec::Value(v) => format!("{v}").parse(),
            AxisSpec::Text(s) => s.parse(),
        }
    }
}

/// Every sweep setting optional, as read from `--config` or from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub quantity: Option<Quantity>,
    pub gamma: Option<AxisSpec>,
    pub phi: Option<AxisSpec>,
    pub k: Option<AxisSpec>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl SweepSettings {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn overridden_by(self, over: SweepSettings) -> SweepSettings {
        SweepSettings {
            quantity: over.quantity.or(self.quantity),
            gamma: over.gamma.or(self.gamma),
            phi: over.phi.or(self.phi),
            k: over.k.or(self.k),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub gamma: Axis,
    /// Absent for `max_phase_shift`, which integrates over the flux.
    pub phi: Option<Axis>,
    pub k: Axis,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl SweepConfig {
    pub fn from_settings(s: SweepSettings) -> Result<Self> {
        let quantity = s.quantity.ok_or_else(|| Error::Config("--quantity is required".into()))?;
        let axis = |a: &Option<AxisSpec>, name: &str| -> Result<Axis> {
            a.as_ref().ok_or_else(|| Error::Config(format!("--{name} is required")))?.resolve()
        };
        let gamma = axis(&s.gamma, "gamma")?;
        let k = axis(&s.k, "k")?;
        let phi = match (quantity, &s.phi) {
            (Quantity::MaxPhaseShift, Some(_)) => {
                return Err(Error::Config("max_phase_shift scans the flux itself; drop --phi".into()))
            }
            (Quantity::MaxPhaseShift, None) => None,
            _ => Some(axis(&s.phi, "phi")?),
        };
        if quantity == Quantity::PhaseProfile {
            if !phi.is_some_and(|a| a.is_range()) {
                return Err(Error::Config("phase_profile needs a flux range --phi lo:hi:count".into()));
            }
            if gamma.is_range() || k.is_range() {
                return Err(Error::Config("phase_profile sweeps the flux only; fix --gamma and --k".into()));
            }
        }
        Ok(SweepConfig { quantity, gamma, phi, k, output: s.output, format: s.format.unwrap_or_default() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    SingularGap,
}

/// One grid point. Amplitude cells are empty at a lasing pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub gamma: f64,
    pub phi: f64,
    pub k: f64,
    pub re_t: Option<f64>,
    pub im_t: Option<f64>,
    pub abs_t: Option<f64>,
    pub arg_t: Option<f64>,
    pub re_r: Option<f64>,
    pub im_r: Option<f64>,
    pub abs_r: Option<f64>,
    pub arg_r: Option<f64>,
    /// Empty where `xi+` vanishes.
    pub det_m_re: Option<f64>,
    pub det_m_im: Option<f64>,
    pub chi_abs: f64,
    pub flag: RowFlag,
}

impl DatasetRow {
    pub fn evaluate(gamma: f64, phi: f64, k: f64) -> Result<Self> {
        let p = ModelParams::new(gamma, phi, k)?;
        let chi_abs = derived_quantities(&p).chi_abs;
        let det = det_transfer(&p).ok();
        let mut row = DatasetRow {
            gamma,
            phi,
            k,
            re_t: None,
            im_t: None,
            abs_t: None,
            arg_t: None,
            re_r: None,
            im_r: None,
            abs_r: None,
            arg_r: None,
            det_m_re: det.map(|d| d.re),
            det_m_im: det.map(|d| d.im),
            chi_abs,
            flag: RowFlag::SingularGap,
        };
        match scattering_amplitudes(&p) {
            Ok(a) => {
                let (t, r) = (a.t_left, a.r_left);
                row.re_t = Some(t.re);
                row.im_t = Some(t.im);
                row.abs_t = Some(t.norm());
                row.arg_t = Some(t.arg());
                row.re_r = Some(r.re);
                row.im_r = Some(r.im);
                row.abs_r = Some(r.norm());
                row.arg_r = Some(r.arg());
                row.flag = RowFlag::Ok;
            }
            Err(Error::SingularTransmission(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub gamma: f64,
    pub k: f64,
    /// Empty when the reference flux sits on the lasing pole.
    pub delta_omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutput {
    Rows(Vec<DatasetRow>),
    Shifts(Vec<ShiftRow>),
}

impl SweepOutput {
    pub fn len(&self) -> usize {
        match self {
            SweepOutput::Rows(r) => r.len(),
            SweepOutput::Shifts(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rows(&self) -> Option<&[DatasetRow]> {
        match self {
            SweepOutput::Rows(r) => Some(r),
            SweepOutput::Shifts(_) => None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (SweepOutput::Rows(r), Format::Csv) => rows_to_csv(r),
            (SweepOutput::Shifts(s), Format::Csv) => shifts_to_csv(s),
            (SweepOutput::Rows(r), Format::Json) => to_json(r),
            (SweepOutput::Shifts(s), Format::Json) => to_json(s),
        }
    }
}

/// Runs `f` on a pool sized by `ABRING_THREADS`, or on the global pool.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let gammas = cfg.gamma.values();
    let ks = cfg.k.values();
    with_thread_pool(|| match cfg.phi {
        None => {
            let grid: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| ks.iter().map(move |&k| (g, k))).collect();
            let rows = grid
                .par_iter()
                .map(|&(gamma, k)| ShiftRow { gamma, k, delta_omega: max_phase_shift(k, gamma).ok() })
                .collect();
            Ok(SweepOutput::Shifts(rows))
        }
        Some(phi_axis) => {
            let phis = phi_axis.values();
            let mut grid = Vec::with_capacity(gammas.len() * phis.len() * ks.len());
            for &g in &gammas {
                for &p in &phis {
                    grid.extend(ks.iter().map(|&k| (g, p, k)));
                }
            }
            let rows = grid
                .par_iter()
                .map(|&(g, p, k)| DatasetRow::evaluate(g, p, k))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepOutput::Rows(rows))
        }
    })?
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[DatasetRow]) -> String {
    let mut out = String::with_capacity(256 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            cell(Some(r.gamma)),
            cell(Some(r.phi)),
            cell(Some(r.k)),
            cell(r.re_t),
            cell(r.im_t),
            cell(r.abs_t),
            cell(r.arg_t),
            cell(r.re_r),
            cell(r.im_r),
            cell(r.abs_r),
            cell(r.arg_r),
            cell(r.det_m_re),
            cell(r.det_m_im),
            cell(Some(r.chi_abs)),
        ];
        let flag = match r.flag {
            RowFlag::Ok => "ok",
            RowFlag::SingularGap => "singular_gap",
        };
        let _ = writeln!(out, "{},{flag}", cells.join(","));
    }
    out
}

pub fn shifts_to_csv(rows: &[ShiftRow]) -> String {
    let mut out = String::from(SHIFT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", cell(Some(r.gamma)), cell(Some(r.k)), cell(r.delta_omega));
    }
    out
}

fn to_json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize to JSON");
    s.push('\n');
    s
}

/// Inverse of [`rows_to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<DatasetRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Config("CSV header does not match the dataset layout".into()));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 15 {
                return Err(Error::Config(format!("line {}: expected 15 fields, got {}", n + 2, f.len())));
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| Error::Config(format!("line {}: bad number {s:?}", n + 2)))
                }
            };
            let req = |s: &str| -> Result<f64> {
                opt(s)?.ok_or_else(|| Error::Config(format!("line {}: missing required value", n + 2)))
            };
            let flag = match f[14] {
                "ok" => RowFlag::Ok,
                "singular_gap" => RowFlag::SingularGap,
                other => return Err(Error::Config(format!("line {}: unknown flag {other:?}", n + 2))),
            };
            Ok(DatasetRow {
                gamma: req(f[0])?,
                phi: req(f[1])?,
                k: req(f[2])?,
                re_t: opt(f[3])?,
                im_t: opt(f[4])?,
                abs_t: opt(f[5])?,
                arg_t: opt(f[6])?,
                re_r: opt(f[7])?,
                im_r: opt(f[8])?,
                abs_r: opt(f[9])?,
                arg_r: opt(f[10])?,
                det_m_re: opt(f[11])?,
                det_m_im: opt(f[12])?,
                chi_abs: req(f[13])?,
                flag,
            })
        })
        .collect()
}

/// Writes rendered output to `path`, or to stdout when `path` is `None`.
pub fn emit(output: &SweepOutput, format: Format, path: Option<&Path>) -> Result<()> {
    let text = output.render(format);
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn settings(q: Quantity, g: &str, phi: Option<&str>, k: &str) -> SweepSettings {
        SweepSettings {
            quantity: Some(q),
            gamma: Some(AxisSpec::Text(g.into())),
            phi: phi.map(|p| AxisSpec::Text(p.into())),
            k: Some(AxisSpec::Text(k.into())),
            ..Default::default()
        }
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("0.5".parse::<Axis>().unwrap(), Axis::Fixed(0.5));
        assert_eq!("0:1:3".parse::<Axis>().unwrap().values(), vec![0.0, 0.5, 1.0]);
        for bad in ["0:1:1", "1:0:5", "0:1", "a", "0:1:x", "0:1:2:3", "nan"] {
            assert!(bad.parse::<Axis>().is_err(), "{bad}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::from_settings(settings(Quantity::Amplitudes, "0:1:10", Some("0:1:10"), "0:1:10")).is_ok());
        let mut s = settings(Quantity::Amplitudes, "0", Some("0"), "1");
        s.quantity = None;
        assert!(SweepConfig::from_settings(s).is_err());
        assert!(SweepConfig::from_settings(settings(Quantity::PhaseProfile, "0.7", Some("0.3"), "1.5")).is_err());
        assert!(SweepConfig::from_settings(settings(Quantity::MaxPhaseShift, "0.7", Some("0.3"), "1.5")).is_err());
        let c = SweepConfig::from_settings(settings(Quantity::MaxPhaseShift, "0.8:1.3:3", None, "1.5708")).unwrap();
        assert!(c.phi.is_none());
    }

    #[test]
    fn flags_override_file() {
        let file: SweepSettings =
            serde_json::from_str(r#"{"quantity": "amplitudes", "gamma": 0.2, "phi": "0:1:5", "k": 1.0}"#).unwrap();
        let flags = SweepSettings { gamma: Some(AxisSpec::Text("0.9".into())), ..Default::default() };
        let c = SweepConfig::from_settings(file.overridden_by(flags)).unwrap();
        assert_eq!(c.gamma, Axis::Fixed(0.9));
        assert_eq!(c.phi.unwrap().values().len(), 5);
        assert!(serde_json::from_str::<SweepSettings>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn trivial_row() {
        let r = DatasetRow::evaluate(0.0, 0.0, 1.0).unwrap();
        assert!((r.abs_t.unwrap() - 1.0).abs() < 1e-13);
        assert!(r.abs_r.unwrap() < 1e-13);
        assert_eq!(r.flag, RowFlag::Ok);
    }

    #[test]
    fn pole_rows_are_gaps() {
        let r = DatasetRow::evaluate(1.0, FRAC_PI_4, FRAC_PI_2).unwrap();
        assert_eq!(r.flag, RowFlag::SingularGap);
        assert!(r.re_t.is_none() && r.arg_r.is_none());
        let csv = rows_to_csv(&[r]);
        let line = csv.lines().nth(1).unwrap();
        assert!(line.contains(",,,,,,,,"));
        assert!(line.ends_with(",singular_gap"));
        let json = to_json(&[r]);
        assert!(json.contains("\"re_t\": null"));
    }

    #[test]
    fn csv_roundtrip_is_bit_exact() {
        let cfg = SweepConfig::from_settings(settings(Quantity::Amplitudes, "0:1.2:3", Some("0:1.5:4"), "0.3:2.9:3")).unwrap();
        let out = run_sweep(&cfg).unwrap();
        let rows = out.rows().unwrap();
        assert_eq!(rows.len(), 36);
        let csv = rows_to_csv(rows);
        assert_eq!(csv.lines().count(), 37);
        assert!(!csv.contains('\r'));
        assert_eq!(parse_csv(&csv).unwrap(), rows);
        let back: Vec<DatasetRow> = serde_json::from_str(&to_json(rows)).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn lexicographic_order() {
        let cfg = SweepConfig::from_settings(settings(Quantity::Amplitudes, "0:1:2", Some("0:1:2"), "1:2:2")).unwrap();
        let out = run_sweep(&cfg).unwrap();
        let keys: Vec<(f64, f64, f64)> = out.rows().unwrap().iter().map(|r| (r.gamma, r.phi, r.k)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn abs_and_arg_consistent() {
        let r = DatasetRow::evaluate(0.6, 0.4, 2.0).unwrap();
        let t = num_complex::Complex64::new(r.re_t.unwrap(), r.im_t.unwrap());
        assert!((t.norm() - r.abs_t.unwrap()).abs() < 1e-12);
        assert!((t.arg() - r.arg_t.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn shift_table() {
        let cfg = SweepConfig::from_settings(settings(Quantity::MaxPhaseShift, "0.8:1.3:2", None, "1.57080632679")).unwrap();
        let out = run_sweep(&cfg).unwrap();
        let csv = out.render(Format::Csv);
        assert!(csv.starts_with("gamma,k,delta_omega\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
