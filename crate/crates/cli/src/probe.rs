//! Exploratory tables for questions the theory leaves open. Nothing here is
//! a verdict; every probe reports `exploratory`.

use blochkit::bloch::{omega_empirical_lower, omega_lower_bound, omega_upper_bound, OmegaKind};
use blochkit::domain::{rho_from_origin, Domain, PathOptions, Point};
use blochkit::operator::{empirical_opnorm_lower, norm_bounds, BatteryConfig};
use blochkit::random::{complex_in_disk, random_polynomial, seeded_rng};
use num_complex::Complex64;

use crate::commands::omega_config;
use crate::config::Settings;
use crate::report::{Report, Table};
use crate::CliError;

pub const QUESTIONS: [&str; 4] = ["omega-vs-rho", "omega-vs-omega0", "omega0-blowup", "norm-sharpness"];

const RADII: [f64; 8] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999];

fn probe_domain(s: &Settings) -> Result<Domain, CliError> {
    let d: Domain = s.domain.as_deref().unwrap_or("polydisk:2").parse()?;
    d.validate()?;
    match d {
        Domain::Ball(_) | Domain::Polydisk(_) | Domain::Disk => Ok(d),
        other => Err(CliError::Usage(format!("probes support disk, ball and polydisk domains, not {other}"))),
    }
}

/// Unit direction with unequal coordinates so polydisk probes leave the
/// diagonal; scaled by `r` it stays inside every supported domain for r < 1.
fn direction(d: &Domain, seed: u64) -> Point {
    let n = d.ambient_dim();
    let mut rng = seeded_rng(seed);
    let v: Vec<Complex64> = (0..n).map(|_| complex_in_disk(&mut rng, 1.0)).collect();
    let p = Point(v);
    match d {
        Domain::Polydisk(_) => p.scaled(1.0 / p.max_modulus()),
        _ => p.scaled(1.0 / p.norm()),
    }
}

fn omega_vs_rho(d: &Domain, s: &Settings) -> Result<Table, CliError> {
    let mut t = Table::new(&["r", "omega_lower", "omega_upper", "omega_empirical", "rho_lower", "rho_upper"]);
    let u = direction(d, s.sampling.seed);
    let ocfg = omega_config(s);
    for r in RADII {
        let z = u.scaled(r);
        let w = omega_empirical_lower(d, &z, OmegaKind::Omega, &ocfg)?.value;
        let rho = rho_from_origin(d, &z, PathOptions::default())?;
        t.push(&[
            r,
            omega_lower_bound(d, z.coords()),
            omega_upper_bound(d, z.coords()),
            w,
            rho.lower,
            rho.upper_or_inf(),
        ]);
    }
    Ok(t)
}

fn omega_vs_omega0(d: &Domain, s: &Settings) -> Result<Table, CliError> {
    let mut t = Table::new(&["r", "omega_empirical", "omega0_empirical", "omega0_dilation", "ratio"]);
    let u = direction(d, s.sampling.seed);
    let ocfg = omega_config(s);
    for r in RADII {
        let z = u.scaled(r);
        let w = omega_empirical_lower(d, &z, OmegaKind::Omega, &ocfg)?.value;
        let w0 = omega_empirical_lower(d, &z, OmegaKind::OmegaZero, &ocfg)?;
        t.push(&[r, w, w0.value, w0.dilation, w0.value / w]);
    }
    Ok(t)
}

fn omega0_blowup(d: &Domain, s: &Settings) -> Result<Table, CliError> {
    let mut t = Table::new(&["eps", "omega0_empirical", "omega_empirical", "omega_lower"]);
    let n = d.ambient_dim();
    let ocfg = omega_config(s);
    for &eps in &s.sampling.eps_ladder {
        // toward the distinguished boundary: all moduli equal
        let r = match d {
            Domain::Polydisk(_) | Domain::Disk => 1.0 - eps,
            _ => (1.0 - eps) / (n as f64).sqrt(),
        };
        let z = Point(vec![Complex64::new(r, 0.0); n]);
        let w0 = omega_empirical_lower(d, &z, OmegaKind::OmegaZero, &ocfg)?.value;
        let w = omega_empirical_lower(d, &z, OmegaKind::Omega, &ocfg)?.value;
        t.push(&[eps, w0, w, omega_lower_bound(d, z.coords())]);
    }
    Ok(t)
}

fn norm_sharpness(d: &Domain, s: &Settings) -> Result<Table, CliError> {
    let mut t = Table::new(&["index", "norm_lower", "opnorm_lower", "norm_upper", "upper_over_lower"]);
    let mut rng = seeded_rng(s.sampling.seed);
    let battery = BatteryConfig { seed: s.sampling.seed, ..BatteryConfig::default() };
    for i in 0..10 {
        let psi = random_polynomial(&mut rng, d.ambient_dim(), 3, 0.9);
        let nb = norm_bounds(d, &psi, &s.sampling)?;
        let o = empirical_opnorm_lower(d, &psi, &battery, &s.sampling)?;
        let up = nb.upper.upper_or_inf();
        t.push(&[i as f64, nb.lower.lower, o.value, up, up / o.value]);
    }
    Ok(t)
}

pub fn command(s: &Settings) -> Result<Report, CliError> {
    let q = s
        .question
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--question is required; one of {QUESTIONS:?}")))?;
    let d = probe_domain(s)?;
    let table = match q {
        "omega-vs-rho" => omega_vs_rho(&d, s)?,
        "omega-vs-omega0" => omega_vs_omega0(&d, s)?,
        "omega0-blowup" => omega0_blowup(&d, s)?,
        "norm-sharpness" => norm_sharpness(&d, s)?,
        other => return Err(CliError::Usage(format!("unknown question '{other}'; expected one of {QUESTIONS:?}"))),
    };
    let mut r = Report::new("probe", s.sampling.seed, s.sampling.samples);
    r.domain = Some(d.to_string());
    r.tables.insert(q.into(), table);
    r.verdict("question", q);
    r.verdict("status", "exploratory");
    Ok(r)
}
