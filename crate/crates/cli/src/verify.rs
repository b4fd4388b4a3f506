//! Verification suites: property checks of the theorems at desk scale.

use blochkit::bloch::{
    beta_estimate, omega_empirical_lower, omega_exact_ball, omega_polydisk_bounds, q_value, q_value_oracle,
    OmegaConfig, OmegaKind,
};
use blochkit::constants::{bloch_constant, in_class_d, registry_domains};
use blochkit::domain::{path_length, sample_interior, Domain, PiecewisePath, Point};
use blochkit::operator::{
    compactness_verdict, empirical_opnorm_lower, isometry_verdict, norm_bounds, spectrum_cloud, BatteryConfig,
    CompactnessVerdict, CompactnessWitness, IsometryVerdict,
};
use blochkit::random::{complex_in_disk, random_polynomial, seeded_rng};
use blochkit::search::SamplingConfig;
use blochkit::symbols::{SymbolExpr, Var};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::report::{Check, Report};
use crate::CliError;

pub const SUITES: [&str; 9] = [
    "q-oracle",
    "omega",
    "product-rule",
    "growth-lemma",
    "norm-sandwich",
    "spectrum",
    "compactness",
    "isometry",
    "constants",
];

/// Domains with a Bergman metric used by the random instances.
const METRIC_POOL: [Domain; 7] = [
    Domain::Disk,
    Domain::Ball(2),
    Domain::Ball(3),
    Domain::Ball(4),
    Domain::Polydisk(2),
    Domain::Polydisk(3),
    Domain::Polydisk(4),
];

struct Suite {
    name: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite { name, checks: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn check(
        &mut self,
        criterion: u32,
        name: &str,
        reference: &str,
        measured: f64,
        tolerance: Option<f64>,
        pass: bool,
        detail: String,
    ) {
        self.checks.push(Check {
            suite: self.name.into(),
            criterion,
            name: name.into(),
            reference: reference.into(),
            measured: measured.is_finite().then_some(measured),
            tolerance,
            pass,
            detail,
        });
    }
}

fn rng_for(seed: u64, criterion: u64) -> ChaCha8Rng {
    seeded_rng(seed ^ (criterion.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &'a [Domain]) -> &'a Domain {
    &pool[rng.gen_range(0..pool.len())]
}

fn one_point(d: &Domain, rng: &mut ChaCha8Rng) -> Result<Point, CliError> {
    Ok(sample_interior(d, 1, rng.gen())?.remove(0))
}

fn q_oracle(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("q-oracle");
    let mut rng = rng_for(cfg.seed, 1);
    let (mut worst_gap, mut worst_excess, mut nonzero) = (0.0f64, f64::NEG_INFINITY, 0);
    for _ in 0..1000 {
        let d = pick(&mut rng, &METRIC_POOL);
        let f = random_polynomial(&mut rng, d.ambient_dim(), 4, 0.9);
        let z = one_point(d, &mut rng)?;
        let q = q_value(d, &f, &z)?;
        let o = q_value_oracle(d, &f, &z, 4096)?;
        worst_excess = worst_excess.max(o - q);
        if q > 0.0 {
            nonzero += 1;
            worst_gap = worst_gap.max((q - o) / q);
        }
    }
    s.check(
        1,
        "oracle-below-closed-form",
        "Q_f = sup over directions; every direction gives a lower bound",
        worst_excess,
        Some(0.0),
        worst_excess <= 0.0,
        "max(oracle - q) over 1000 instances".into(),
    );
    s.check(
        1,
        "oracle-relative-gap",
        "Q_f(z) = (g^T H^-1 conj g)^(1/2)",
        worst_gap,
        Some(1e-3),
        worst_gap <= 1e-3,
        format!("max relative gap over {nonzero} instances with Q > 0"),
    );

    let mut worst = 0.0f64;
    for i in 0..1000 {
        let z = complex_in_disk(&mut rng, 0.999);
        let (f, fp) = if i % 5 == 4 {
            let w = complex_in_disk(&mut rng, 0.99);
            let a = w.conj();
            (SymbolExpr::f_form(0, w, 1)?, a / (Complex64::new(1.0, 0.0) - a * a * z * z))
        } else {
            let f = random_polynomial(&mut rng, 1, 4, 0.9);
            let p = f.normal_form().expect("small polynomial");
            let mut fp = Complex64::new(0.0, 0.0);
            for (mono, c) in &p.terms {
                if let [(Var::Z(0), e)] = mono.as_slice() {
                    fp += c * f64::from(*e) * z.powu(e - 1);
                }
            }
            (f, fp)
        };
        let q = q_value(&Domain::Disk, &f, &Point(vec![z]))?;
        let expect = (1.0 - z.norm_sqr()) * fp.norm();
        worst = worst.max((q - expect).abs() / expect.max(1.0));
    }
    s.check(
        2,
        "disk-formula",
        "on the disk Q_f(z) = (1 - |z|^2)|f'(z)|",
        worst,
        Some(1e-12),
        worst <= 1e-12,
        "max |q - (1-|z|^2)|f'(z)|| / max(1, value) over 1000 instances".into(),
    );
    Ok(s.checks)
}

fn omega_suite(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("omega");
    let mut rng = rng_for(cfg.seed, 3);
    let balls = [Domain::Ball(2), Domain::Ball(3), Domain::Ball(4)];
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let r = 0.999 * i as f64 / 100.0;
        let d = pick(&mut rng, &balls);
        let dir = sample_interior(d, 1, rng.gen())?.remove(0);
        let z = dir.scaled(r / dir.norm());
        let len = path_length(d, &PiecewisePath::segment(Point::origin(d.ambient_dim()), z))?;
        worst = worst.max((len - r.atanh()).abs());
    }
    s.check(
        3,
        "ball-radial-length",
        "omega(z) = (1/2) log((1+|z|)/(1-|z|)) = length of the radial segment",
        worst,
        Some(1e-4),
        worst <= 1e-4,
        "100 radii up to 0.999".into(),
    );
    let ocfg = OmegaConfig { seed: cfg.seed, sampling: cfg.clone(), ..OmegaConfig::default() };
    let mut ratio = f64::INFINITY;
    for _ in 0..50 {
        let d = pick(&mut rng, &balls);
        let z = one_point(d, &mut rng)?;
        let exact = omega_exact_ball(&z)?;
        if exact > 0.0 {
            let w = omega_empirical_lower(d, &z, OmegaKind::Omega, &ocfg)?;
            ratio = ratio.min(w.value / exact);
        }
    }
    s.check(
        3,
        "ball-empirical-fraction",
        "omega(z) = artanh|z| on the ball",
        ratio,
        Some(0.95),
        ratio >= 0.95,
        "min empirical/exact over 50 points".into(),
    );

    let polys = [Domain::Polydisk(2), Domain::Polydisk(3), Domain::Polydisk(4)];
    let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..500 {
        let d = pick(&mut rng, &polys);
        let z = one_point(d, &mut rng)?;
        let lo = z.coords().iter().map(|c| c.norm().atanh()).fold(0.0, f64::max);
        let w = omega_empirical_lower(d, &z, OmegaKind::Omega, &ocfg)?.value;
        let up = omega_polydisk_bounds(&z)?.upper_or_inf();
        below = below.max(lo - w);
        above = above.max(w - up);
    }
    s.check(
        4,
        "polydisk-lower-sandwich",
        "max_k artanh|z_k| <= omega(z)",
        below,
        Some(1e-9),
        below <= 1e-9,
        "max(max_k artanh|z_k| - empirical) over 500 points".into(),
    );
    s.check(
        4,
        "polydisk-upper-sandwich",
        "omega(z) <= rho(0, z) <= straight-segment length",
        above,
        Some(0.0),
        above <= 0.0,
        "max(empirical - straight segment) over 500 points".into(),
    );
    Ok(s.checks)
}

fn product_rule(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("product-rule");
    let mut rng = rng_for(cfg.seed, 5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let d = pick(&mut rng, &METRIC_POOL);
        let n = d.ambient_dim();
        let psi = random_polynomial(&mut rng, n, 3, 0.9);
        let f = random_polynomial(&mut rng, n, 3, 0.9);
        let z = one_point(d, &mut rng)?;
        let lhs = q_value(d, &psi.mul(&f)?, &z)?;
        let rhs = psi.evaluate(&z)?.norm() * q_value(d, &f, &z)? + f.evaluate(&z)?.norm() * q_value(d, &psi, &z)?;
        worst = worst.max(lhs - rhs);
    }
    s.check(
        5,
        "product-rule",
        "Q_{psi f} <= |psi| Q_f + |f| Q_psi",
        worst,
        Some(1e-12),
        worst <= 1e-12,
        "max(lhs - rhs) over 1000 triples".into(),
    );
    Ok(s.checks)
}

fn growth_lemma(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("growth-lemma");
    let mut rng = rng_for(cfg.seed, 6);
    let balls = [Domain::Ball(2), Domain::Ball(3), Domain::Ball(4)];
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let d = pick(&mut rng, &balls);
        let n = d.ambient_dim();
        let f = random_polynomial(&mut rng, n, 4, 0.9);
        let beta = beta_estimate(d, &f, &cfg.clone().with_seed(rng.gen()))?.lower;
        let f0 = f.evaluate(&Point::origin(n))?.norm();
        for z in sample_interior(d, 10, rng.gen())? {
            let bound = f0 + omega_exact_ball(&z)? * 1.05 * beta;
            worst = worst.max(f.evaluate(&z)?.norm() - bound);
        }
    }
    s.check(
        6,
        "growth-lemma",
        "|f(z)| <= |f(0)| + omega(z) beta_f",
        worst,
        Some(0.0),
        worst <= 0.0,
        "max(|f(z)| - |f(0)| - omega(z) 1.05 beta_sampled) over 100 functions x 10 points".into(),
    );
    Ok(s.checks)
}

fn norm_sandwich(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("norm-sandwich");
    let mut rng = rng_for(cfg.seed, 7);
    let battery = BatteryConfig { seed: cfg.seed, ..BatteryConfig::default() };
    for d in [Domain::Ball(2), Domain::Polydisk(2)] {
        let (mut over, mut under, mut order) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut infinite = 0;
        for _ in 0..20 {
            let psi = random_polynomial(&mut rng, 2, 3, 0.9);
            let nb = norm_bounds(&d, &psi, cfg)?;
            let o = empirical_opnorm_lower(&d, &psi, &battery, cfg)?;
            if nb.upper.upper.is_none() {
                infinite += 1;
            }
            over = over.max(o.value - nb.upper.upper_or_inf());
            under = under.max(nb.lower.lower - o.value);
            order = order.max(nb.lower.lower - nb.upper.upper_or_inf());
        }
        s.check(
            7,
            &format!("opnorm-below-upper[{d}]"),
            "||M_psi|| <= max{||psi||_B, ||psi||_inf + sigma_psi}",
            over,
            Some(0.0),
            over <= 0.0,
            format!("max(empirical lower - certified upper) over 20 symbols; upper infinite for {infinite}"),
        );
        s.check(
            7,
            &format!("lower-below-opnorm[{d}]"),
            "max{||psi||_B, ||psi||_inf} <= ||M_psi||",
            under,
            Some(1e-9),
            under <= 1e-9,
            "max(sandwich lower - empirical lower) over 20 symbols".into(),
        );
        s.check(
            7,
            &format!("sandwich-ordered[{d}]"),
            "sandwich lower <= sandwich upper",
            order,
            Some(0.0),
            order <= 0.0,
            "max(lower - upper)".into(),
        );
    }
    Ok(s.checks)
}

fn spectrum_suite(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("spectrum");
    let psi = SymbolExpr::coordinate(0, 2)?;
    let c = spectrum_cloud(&Domain::Ball(2), &psi, 100_000, cfg.seed)?;
    let m = c.summary.max_modulus;
    s.check(8, "range-in-unit-disk", "spectrum = closure of psi(D) = closed unit disk", m, Some(1.0), m < 1.0, "max |z1| over 1e5 samples".into());
    let (inside, empty) = c.empty_cells_in_disk(0.95, 20);
    s.check(
        8,
        "range-covers-disk",
        "spectrum = closure of psi(D) = closed unit disk",
        empty as f64,
        Some(0.0),
        empty == 0,
        format!("empty cells among {inside} cells of a 20x20 grid inside radius 0.95"),
    );
    let k = SymbolExpr::constant(Complex64::new(0.3, -2.0), 2);
    let c = spectrum_cloud(&Domain::Ball(2), &k, 100_000, cfg.seed)?;
    let single = c.points == vec![Complex64::new(0.3, -2.0)];
    s.check(8, "constant-singleton", "spectrum of a constant symbol is {c}", c.points.len() as f64, Some(1.0), single, "cloud of psi = 0.3-2i".into());
    Ok(s.checks)
}

fn compactness_suite(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("compactness");
    let mut rng = rng_for(cfg.seed, 9);
    let zero = SymbolExpr::parse("0", 2)?;
    let v = compactness_verdict(&Domain::Ball(2), &zero, cfg)?.verdict;
    s.check(9, "zero-is-compact", "M_psi compact iff psi = 0", 0.0, None, v == CompactnessVerdict::Compact, v.as_str().into());
    let mut bad = 0;
    for _ in 0..50 {
        let d = pick(&mut rng, &METRIC_POOL);
        let psi = random_polynomial(&mut rng, d.ambient_dim(), 4, 0.9);
        let r = compactness_verdict(d, &psi, cfg)?;
        let ok = r.verdict == CompactnessVerdict::NotCompact
            && matches!(r.witness, Some(CompactnessWitness::TwoPoints { va, vb, .. }) if va != vb);
        if !ok {
            bad += 1;
        }
    }
    s.check(
        9,
        "nonzero-not-compact",
        "M_psi compact iff psi = 0",
        bad as f64,
        Some(0.0),
        bad == 0,
        "symbols without a not-compact verdict and two-point witness, of 50".into(),
    );
    Ok(s.checks)
}

fn isometry_suite(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("isometry");
    let mut rng = rng_for(cfg.seed, 10);
    let small = cfg.clone().with_samples(cfg.samples.min(2000));
    let mut failures = Vec::new();
    let mut count = 0;
    for d in registry_domains() {
        let phases = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), complex_in_disk(&mut rng, 1.0)];
        for p in phases {
            let c = if p.norm() > 0.0 { p / p.norm() } else { Complex64::new(1.0, 0.0) };
            let r = isometry_verdict(&d, &SymbolExpr::constant(c, d.ambient_dim()), 16, &small)?;
            count += 1;
            if r.verdict != IsometryVerdict::Isometry {
                failures.push(d.to_string());
            }
        }
    }
    s.check(
        10,
        "unimodular-constants",
        "a constant of modulus one gives an isometry",
        failures.len() as f64,
        Some(0.0),
        failures.is_empty(),
        format!("{count} constants over the registry domains; failing: {failures:?}"),
    );
    for d in [Domain::Ball(2), Domain::Ball(5), Domain::CartanII(2)] {
        let n = d.ambient_dim();
        let mut symbols = vec![SymbolExpr::coordinate(0, n)?];
        symbols.extend((0..20).map(|_| random_polynomial(&mut rng, n, 3, 0.9)));
        let (mut wrong, mut worst_cross, mut no_cross) = (0, 0usize, 0);
        for psi in &symbols {
            let r = isometry_verdict(&d, psi, 16, &small)?;
            if r.verdict != IsometryVerdict::NotIsometry {
                wrong += 1;
            }
            match r.crossing {
                Some(k) => worst_cross = worst_cross.max(k),
                None => no_cross += 1,
            }
        }
        s.check(
            10,
            &format!("nonconstant-fail[{d}]"),
            "on a domain with c_D < 1 only unimodular constants give isometries",
            wrong as f64,
            Some(0.0),
            wrong == 0,
            "z1 and 20 random polynomials".into(),
        );
        s.check(
            10,
            &format!("power-crossing[{d}]"),
            "|psi(0)|^k = 1 - beta_{psi^k} >= 1 - c_D would hold for an isometry",
            worst_cross as f64,
            Some(16.0),
            no_cross == 0 && worst_cross <= 16,
            format!("largest crossing index; {no_cross} sequences without crossing within 16"),
        );
        if d.has_metric() {
            let r = isometry_verdict(&d, &SymbolExpr::coordinate(0, n)?, 1, &small)?;
            let u = r.power_norms[0].upper_or_inf();
            s.check(
                10,
                &format!("coordinate-norm-below-one[{d}]"),
                "||z1||_B = beta_{z1} <= c_D < 1",
                u,
                Some(1.0),
                u < 1.0,
                "certified upper end of ||z1||_B".into(),
            );
        }
    }
    Ok(s.checks)
}

fn disk_like(d: &Domain) -> bool {
    matches!(
        d,
        Domain::Disk
            | Domain::Ball(1)
            | Domain::Polydisk(1)
            | Domain::CartanI { m: 1, n: 1 }
            | Domain::CartanII(1)
            | Domain::CartanIII(2)
            | Domain::CartanIV(1)
    )
}

fn constants_suite(cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    let mut s = Suite::new("constants");
    let mut rng = rng_for(cfg.seed, 11);
    let mut cases: Vec<(Domain, f64)> = Vec::new();
    for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (5, 1), (5, 4), (7, 3)] {
        cases.push((Domain::CartanI { m, n }, (2.0 / (n + m) as f64).sqrt()));
    }
    for n in 1..=10 {
        cases.push((Domain::Ball(n), (2.0 / (n + 1) as f64).sqrt()));
        cases.push((Domain::CartanII(n), (2.0 / (n + 1) as f64).sqrt()));
        cases.push((Domain::CartanIII(n + 1), (1.0 / n as f64).sqrt()));
        cases.push((Domain::CartanIV(n + 2), (2.0 / (n + 2) as f64).sqrt()));
    }
    cases.push((Domain::Exceptional1, 1.0 / 6f64.sqrt()));
    cases.push((Domain::Exceptional2, 1.0 / 3.0));
    let mut worst = 0.0f64;
    for (d, v) in &cases {
        worst = worst.max((bloch_constant(d)? - v).abs());
    }
    s.check(
        11,
        "closed-forms",
        "sqrt(2/(n+m)), sqrt(2/(n+1)), sqrt(1/(n-1)), sqrt(2/n), 1/sqrt(6), 1/3",
        worst,
        Some(0.0),
        worst == 0.0,
        format!("max deviation over {} descriptors", cases.len()),
    );

    let pool: Vec<Domain> = cases.iter().map(|c| c.0.clone()).chain([Domain::Polydisk(2), Domain::Polydisk(3)]).collect();
    let (mut max_err, mut class_err) = (0.0f64, 0);
    for _ in 0..50 {
        let k = rng.gen_range(2..=4);
        let factors: Vec<Domain> = (0..k).map(|_| pick(&mut rng, &pool).clone()).collect();
        let expect = factors.iter().map(|f| bloch_constant(f).unwrap()).fold(0.0, f64::max);
        let disk = factors.iter().any(|f| disk_like(f) || matches!(f, Domain::Polydisk(_)));
        let d = Domain::product(factors)?;
        max_err = max_err.max((bloch_constant(&d)? - expect).abs());
        if in_class_d(&d)? == disk {
            class_err += 1;
        }
    }
    for (d, _) in &cases {
        if in_class_d(d)? == disk_like(d) {
            class_err += 1;
        }
    }
    s.check(11, "product-max", "c_D = max over factors", max_err, Some(0.0), max_err == 0.0, "50 random products".into());
    s.check(
        11,
        "class-iff-no-disk-factor",
        "c_D < 1 iff no disk factor in standard form",
        class_err as f64,
        Some(0.0),
        class_err == 0,
        "mismatches over the irreducible cases and 50 products".into(),
    );
    Ok(s.checks)
}

pub fn run_suite(name: &str, cfg: &SamplingConfig) -> Result<Vec<Check>, CliError> {
    match name {
        "q-oracle" => q_oracle(cfg),
        "omega" => omega_suite(cfg),
        "product-rule" => product_rule(cfg),
        "growth-lemma" => growth_lemma(cfg),
        "norm-sandwich" => norm_sandwich(cfg),
        "spectrum" => spectrum_suite(cfg),
        "compactness" => compactness_suite(cfg),
        "isometry" => isometry_suite(cfg),
        "constants" => constants_suite(cfg),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
        other => Err(CliError::Usage(format!("unknown suite '{other}'; expected one of {SUITES:?} or all"))),
    }
}

pub fn command(s: &Settings) -> Result<Report, CliError> {
    let suite = s.suite.as_deref().unwrap_or("all");
    let mut r = Report::new("verify", s.sampling.seed, s.sampling.samples);
    r.checks = run_suite(suite, &s.sampling)?;
    r.verdict("suite", suite);
    r.verdict("result", if r.all_checks_pass() { "pass" } else { "fail" });
    Ok(r)
}
