//! Named self-check suites behind `abring verify`.
//!
//! Each suite evaluates one family of identities on a fixed, seeded set of
//! parameter points and reports the worst deviation next to its tolerance.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use clap::ValueEnum;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::eigensystem::{
    bethe_state, biorthogonality_report, eigen_pair_coefficients, residual, singular_state, Branch, SingularSign,
};
use crate::equivalence::verify_equivalence;
use crate::error::Result;
use crate::lattice::build_hamiltonian;
use crate::params::{classify, derived_quantities, singularity_distance, singularity_locus, ModelParams, SingularityKind};
use crate::scattering::{
    approx_amplitude, det_transfer, max_phase_shift, oracle_amplitudes, phase_profile, scattering_amplitudes,
    transfer_matrix, CriticalPoint,
};

const SEED: u64 = 0x5eed_ab12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Unitarity,
    Oracle,
    Det,
    Locus,
    Transfer,
    Lapse,
    Crossover,
    Quasi,
    Approx,
    Eigen,
    Biorth,
    Equivalence,
    All,
}

impl Suite {
    pub fn members() -> &'static [Suite] {
        &[
            Suite::Unitarity,
            Suite::Oracle,
            Suite::Det,
            Suite::Locus,
            Suite::Transfer,
            Suite::Lapse,
            Suite::Crossover,
            Suite::Quasi,
            Suite::Approx,
            Suite::Eigen,
            Suite::Biorth,
            Suite::Equivalence,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Measured worst-case value.
    pub value: f64,
    /// Bound the value is compared with.
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, passed: value < bound }
    }

    fn above(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, passed: value > bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Overrides for the equivalence suite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    pub n: Option<usize>,
    pub gamma: Option<f64>,
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<Vec<SuiteReport>> {
    if suite == Suite::All {
        return Suite::members().iter().map(|&s| run_one(s, opts)).collect();
    }
    Ok(vec![run_one(suite, opts)?])
}

fn run_one(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let checks = match suite {
        Suite::Unitarity => unitarity(&mut rng)?,
        Suite::Oracle => oracle(&mut rng)?,
        Suite::Det => det()?,
        Suite::Locus => locus()?,
        Suite::Transfer => transfer()?,
        Suite::Lapse => lapse()?,
        Suite::Crossover => crossover()?,
        Suite::Quasi => quasi()?,
        Suite::Approx => approx()?,
        Suite::Eigen => eigen(&mut rng)?,
        Suite::Biorth => biorth(&mut rng)?,
        Suite::Equivalence => equivalence(opts)?,
        Suite::All => unreachable!("expanded by run_suite"),
    };
    Ok(SuiteReport { suite, passed: checks.iter().all(|c| c.passed), checks })
}

fn unitarity(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = ModelParams::new(0.0, rng.gen_range(0.0..PI), rng.gen_range(0.05..PI - 0.05))?;
        if (p.k() - FRAC_PI_2).abs() < 0.01 {
            continue;
        }
        let a = scattering_amplitudes(&p)?;
        worst = worst.max((a.left_flux() - 1.0).abs());
    }
    Ok(vec![Check::below("|r|^2 + |t|^2 - 1 at gamma = 0", worst, 1e-10)])
}

fn oracle(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < 200 {
        let p = ModelParams::new(rng.gen_range(0.0..1.5), rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(0.2..PI - 0.2))?;
        if singularity_distance(&p) <= 1e-3 {
            continue;
        }
        taken += 1;
        worst = worst.max(scattering_amplitudes(&p)?.max_abs_diff(&oracle_amplitudes(&p)?));
    }
    Ok(vec![Check::below("closed form vs lattice solve", worst, 1e-10)])
}

fn det() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for i in 0..30 {
        for j in 0..30 {
            let gamma = 1.5 * i as f64 / 29.0;
            let phi = FRAC_PI_2 * j as f64 / 30.0;
            if (gamma * (2.0 * phi).sin()).abs() <= 1e-3 {
                continue;
            }
            let d = det_transfer(&ModelParams::new(gamma, phi, FRAC_PI_2)?)?;
            worst = worst.max((d + 1.0).norm());
        }
    }
    Ok(vec![Check::below("det M + 1 at k = pi/2", worst, 1e-12)])
}

fn locus() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for i in 1..=50 {
        let gamma = i as f64 / 50.0;
        for phi in singularity_locus(gamma)? {
            let p = ModelParams::new(gamma, phi, FRAC_PI_2)?;
            worst = worst.max(derived_quantities(&p).chi_abs);
        }
    }
    Ok(vec![Check::below("|chi| on the locus", worst, 1e-12)])
}

fn transfer() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for delta in [1e-3, 1e-4, 1e-5] {
        let m = transfer_matrix(&ModelParams::new(1.0, FRAC_PI_4, FRAC_PI_2 + delta)?)?;
        worst = worst.max(m.m22.norm() / delta);
    }
    Ok(vec![Check::below("|M22| / delta approaching the singularity", worst, 2.0)])
}

fn lapse() -> Result<Vec<Check>> {
    let prof = phase_profile(FRAC_PI_2 + 1e-4, 0.707, (0.0, FRAC_PI_2), 2001)?;
    let step = FRAC_PI_2 / 2000.0;
    let phi_c = singularity_locus(0.707)?;
    let mut checks = vec![Check {
        name: "lapse count".into(),
        value: prof.lapse_events.len() as f64,
        bound: 2.0,
        passed: prof.lapse_events.len() == 2,
    }];
    for (ev, target) in prof.lapse_events.iter().zip(phi_c) {
        checks.push(Check::below("lapse location / grid step", (ev.phi - target).abs() / step, 2.0));
        checks.push(Check::below("| |jump| - pi |", (ev.jump.abs() - PI).abs(), 0.1));
    }
    Ok(checks)
}

fn crossover() -> Result<Vec<Check>> {
    let k = FRAC_PI_2 + 1e-5;
    let mut checks = vec![
        Check::above("delta_omega(0.8)", max_phase_shift(k, 0.8)?, PI - 0.1),
        Check::below("| delta_omega(1.0) - pi/2 |", (max_phase_shift(k, 1.0)? - FRAC_PI_2).abs(), 0.05),
        Check::below("delta_omega(1.3)", max_phase_shift(k, 1.3)?, 0.2),
    ];
    let values: Vec<f64> = (0..21).map(|i| max_phase_shift(k, 0.85 + 0.02 * i as f64)).collect::<Result<_>>()?;
    let rise = values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check { name: "largest increase on the gamma grid".into(), value: rise, bound: 0.0, passed: rise <= 0.0 });
    Ok(checks)
}

fn quasi() -> Result<Vec<Check>> {
    let n = 4001;
    let step = FRAC_PI_2 / (n - 1) as f64;
    let prof = phase_profile(FRAC_PI_2 + 1e-3, 0.707, (0.0, FRAC_PI_2), n)?;
    let (imax, _) = prof
        .magnitude_samples
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|m| (i, m)))
        .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
    let phi_c = singularity_locus(0.707)?[0];
    Ok(vec![Check::below("|argmax |t| - phi_c| / grid step", (prof.phi_samples[imax] - phi_c).abs() / step, 1.0)])
}

fn approx() -> Result<Vec<Check>> {
    let cp = CriticalPoint::on_locus(0.707, 0)?;
    let err = |delta: f64| -> Result<f64> {
        let p = ModelParams::new(cp.gamma_c, cp.phi_c, FRAC_PI_2 + delta)?;
        let exact = scattering_amplitudes(&p)?.t_left;
        Ok((approx_amplitude(&p, &cp)?.t_approx - exact).norm() / exact.norm())
    };
    let (e3, e4) = (err(1e-3)?, err(1e-4)?);
    Ok(vec![Check::below("error(1e-4) / error(1e-3)", e4 / e3, 0.3)])
}

fn random_regular(rng: &mut StdRng) -> Result<ModelParams> {
    loop {
        let p = ModelParams::with_sites(
            rng.gen_range(0.05..1.5),
            rng.gen_range(0.0..FRAC_PI_2),
            rng.gen_range(0.2..PI - 0.2),
            60,
        )?;
        if classify(&p, 1e-12).kind == SingularityKind::Regular && singularity_distance(&p) > 1e-3 {
            return Ok(p);
        }
    }
}

fn random_alpha(rng: &mut StdRng) -> (Complex64, Complex64) {
    let t = rng.gen_range(0.0..FRAC_PI_2);
    let v = rng.gen_range(0.0..2.0 * PI);
    (Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), v))
}

fn eigen(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_regular(rng)?;
        let (am, ap) = random_alpha(rng);
        let e = eigen_pair_coefficients(&p, am, ap)?;
        let h = build_hamiltonian(p.n_sites(), p.gamma(), p.phi(), false)?;
        let hd = build_hamiltonian(p.n_sites(), p.gamma(), p.phi(), true)?;
        let energy = derived_quantities(&p).energy;
        for (b, m) in [(Branch::Psi1, &h), (Branch::Psi2, &h), (Branch::Bar1, &hd), (Branch::Bar2, &hd)] {
            worst = worst.max(residual(m, &bethe_state(&p, &e, b)?, energy)?);
        }
    }
    let mut sing: f64 = 0.0;
    for gamma in [1.0, 0.707] {
        for branch in 0..singularity_locus(gamma)?.len() {
            let cp = CriticalPoint::on_locus(gamma, branch)?;
            let h = build_hamiltonian(60, gamma, cp.phi_c, false)?;
            let hd = build_hamiltonian(60, gamma, cp.phi_c, true)?;
            for sign in [SingularSign::Plus, SingularSign::Minus] {
                sing = sing.max(residual(&h, &singular_state(&cp, sign, false, 60)?, 0.0)?);
                sing = sing.max(residual(&hd, &singular_state(&cp, sign, true, 60)?, 0.0)?);
            }
        }
    }
    Ok(vec![
        Check::below("Bethe-state interior residual", worst, 1e-10),
        Check::below("singular-state interior residual", sing, 1e-10),
    ])
}

fn biorth(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_regular(rng)?;
        let (am, ap) = random_alpha(rng);
        let e = eigen_pair_coefficients(&p, am, ap)?;
        worst = worst.max(biorthogonality_report(&p, &e, 20)?.spinor_identity_error);
    }
    let p = ModelParams::new(0.5, 0.3, 1.2)?;
    let e = eigen_pair_coefficients(&p, Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.5f64.sqrt(), 0.0))?;
    let (a, b) = (biorthogonality_report(&p, &e, 200)?, biorthogonality_report(&p, &e, 400)?);
    Ok(vec![
        Check::below("spinor identity", worst, 1e-12),
        Check::below("offdiag(N=400) / offdiag(N=200)", b.offdiag / a.offdiag, 0.6),
    ])
}

fn equivalence(opts: VerifyOptions) -> Result<Vec<Check>> {
    let cases: Vec<(usize, f64)> = match (opts.n, opts.gamma) {
        (None, None) => [0.0, 0.5, 1.0, 1.5].iter().map(|&g| (20, g)).collect(),
        (n, g) => vec![(n.unwrap_or(20), g.unwrap_or(0.5))],
    };
    let mut checks = Vec::new();
    for (n, g) in cases {
        let r = verify_equivalence(n, g)?;
        let worst = [r.norm1, r.norm2, r.cross_block, r.unitarity_u1, r.unitarity_u2]
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        checks.push(Check::below(&format!("equivalence N={n} gamma={g}"), worst, 1e-12));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::Unitarity, Suite::Det, Suite::Locus, Suite::Transfer, Suite::Approx, Suite::Equivalence] {
            let r = run_suite(s, VerifyOptions::default()).unwrap();
            assert!(r[0].passed, "{:?}", r[0]);
        }
    }

    #[test]
    fn equivalence_overrides() {
        let r = run_suite(Suite::Equivalence, VerifyOptions { n: Some(8), gamma: Some(0.3) }).unwrap();
        assert_eq!(r[0].checks.len(), 1);
        assert!(r[0].checks[0].name.contains("N=8"));
    }
}
