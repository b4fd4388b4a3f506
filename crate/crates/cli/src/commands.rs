//! One function per analysis subcommand.

use blochkit::bloch::{
    beta_estimate, beta_upper_bound, bloch_norm_certified, lipschitz_beta_estimate, little_star_membership_diagnostic,
    omega_empirical_lower, omega_exact_ball, omega_lower_bound, omega_polydisk_bounds, omega_upper_bound, q_value,
    q_value_oracle, OmegaConfig, OmegaKind,
};
use blochkit::constants::{bloch_constant_entry, in_class_d, table};
use blochkit::domain::{bergman_metric, parse_point, rho_from_origin, Domain, MetricScale, PathOptions, Point};
use blochkit::estimate::{EstimateInterval, Mode};
use blochkit::operator::{
    boundedness_verdict, compactness_verdict, empirical_opnorm_lower, isometry_verdict, norm_bounds, sigma_estimate,
    sigma_upper_profile, spectrum_cloud, BatteryConfig, BoundednessReport, CompactnessWitness, SigmaKind,
};
use blochkit::symbols::SymbolExpr;
use num_complex::Complex64;

use crate::config::Settings;
use crate::report::{Report, ResultRow, Table};
use crate::CliError;

pub const REF_Q: &str = "Q_f(z) = sup_u |grad f(z) u| / H_z(u, conj u)^(1/2)";
pub const REF_BETA: &str = "beta_f = sup_z Q_f(z)";
pub const REF_NORM: &str = "||f|| = |f(0)| + beta_f";
pub const REF_LIPSCHITZ: &str = "beta_f = sup |f(z) - f(w)| / rho(z, w)";
pub const REF_OMEGA: &str = "omega(z) = sup{|f(z)| : ||f|| <= 1, f(0) = 0}";
pub const REF_OMEGA0: &str = "omega_0(z): same supremum over the little Bloch space";
pub const REF_OMEGA_BALL: &str = "omega(z) = (1/2) log((1 + |z|)/(1 - |z|)) on the ball";
pub const REF_OMEGA_POLY: &str = "max_k artanh|z_k| <= omega_0(z) <= omega(z) <= rho(0, z) on the polydisk";
pub const REF_RHO: &str = "rho(0, z) = inf of Bergman lengths of paths from 0 to z";
pub const REF_SIGMA: &str = "sigma_psi = sup_z omega(z) Q_psi(z)";
pub const REF_SIGMA0: &str = "sigma_0,psi = sup_z omega_0(z) Q_psi(z)";
pub const REF_BOUNDED: &str = "M_psi bounded iff psi in H^inf and sigma_psi finite";
pub const REF_SANDWICH: &str = "max{||psi||_B, ||psi||_inf} <= ||M_psi|| <= max{||psi||_B, ||psi||_inf + sigma_psi}";
pub const REF_SPECTRUM: &str = "spectrum of M_psi = closure of psi(D)";
pub const REF_COMPACT: &str = "M_psi compact iff psi = 0";
pub const REF_ISOMETRY: &str = "M_psi isometry iff psi is a unimodular constant";
pub const REF_CONSTANTS: &str = "c_D = sup{beta_f : f(D) in unit disk}; products take the max";

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.into())
}

pub fn need_domain(s: &Settings) -> Result<Domain, CliError> {
    let text = s.domain.as_deref().ok_or_else(|| usage("--domain is required"))?;
    let d: Domain = text.parse()?;
    d.validate()?;
    Ok(d)
}

pub fn need_symbol(s: &Settings, d: &Domain) -> Result<SymbolExpr, CliError> {
    let text = s.symbol.as_deref().ok_or_else(|| usage("--symbol is required"))?;
    Ok(SymbolExpr::parse(text, d.ambient_dim())?)
}

pub fn need_point(s: &Settings, d: &Domain) -> Result<Point, CliError> {
    let text = s.point.as_deref().ok_or_else(|| usage("--point is required"))?;
    let p = parse_point(text)?;
    d.require_interior(&p)?;
    Ok(p)
}

fn report(s: &Settings, d: Option<&Domain>, f: Option<&SymbolExpr>) -> Report {
    let mut r = Report::new("", s.sampling.seed, s.sampling.samples);
    r.domain = d.map(ToString::to_string);
    r.symbol = f.map(ToString::to_string);
    r
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn domain(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let mut r = report(s, Some(&d), None);
    r.push(ResultRow::exact("ambient_dim", d.ambient_dim() as f64, "complex dimension of the ambient space"));
    r.verdict("canonical", yes_no(d.is_canonical()));
    r.verdict("metric", yes_no(d.has_metric()));
    if let Some(text) = &s.point {
        let p = parse_point(text)?;
        let inside = d.contains(&p)?;
        r.verdict("contains", yes_no(inside));
        if inside && d.has_metric() {
            let ev = bergman_metric(&d, &p)?.eigenvalues();
            let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ev.iter().copied().fold(0.0, f64::max);
            r.push(ResultRow::exact("metric_min_eigenvalue", lo, "H_z positive definite"));
            r.push(ResultRow::exact("metric_max_eigenvalue", hi, "H_z positive definite"));
        }
    }
    Ok(r)
}

pub fn qf(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let z = need_point(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    r.push(ResultRow::exact("q", q_value(&d, &f, &z)?, REF_Q));
    r.push(ResultRow::with_mode("q_oracle", q_value_oracle(&d, &f, &z, 4096)?, Mode::SampledLower, REF_Q));
    r.push(ResultRow::exact("abs_f", f.evaluate(&z)?.norm(), "|f(z)|"));
    Ok(r)
}

pub fn decay_table(rep: &blochkit::bloch::DecayReport) -> Table {
    let mut t = Table::new(&["eps", "max_q"]);
    for (e, q) in &rep.profile.ladder {
        t.push(&[*e, *q]);
    }
    t
}

pub fn beta(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let cfg = &s.sampling;
    let mut r = report(s, Some(&d), Some(&f));
    let b = beta_estimate(&d, &f, cfg)?.with_upper(beta_upper_bound(&d, &f, MetricScale::Distance));
    r.push(ResultRow::interval("beta", &b, REF_BETA));
    r.push(ResultRow::interval("bloch_norm", &bloch_norm_certified(&d, &f, cfg, MetricScale::Distance)?, REF_NORM));
    let bc = beta_estimate(&d, &f, cfg)?.with_upper(beta_upper_bound(&d, &f, MetricScale::BlochConstant));
    r.push(ResultRow::interval("beta_bloch_constant_scale", &bc, REF_CONSTANTS));
    let lip = lipschitz_beta_estimate(&d, &f, cfg.samples.min(2000), cfg.seed)?;
    r.push(ResultRow::with_mode("beta_lipschitz", lip, Mode::SampledLower, REF_LIPSCHITZ));
    let decay = little_star_membership_diagnostic(&d, &f, &cfg.eps_ladder, cfg)?;
    r.verdict("little-bloch", decay.verdict.as_str());
    r.tables.insert("decay".into(), decay_table(&decay));
    Ok(r)
}

pub fn omega_config(s: &Settings) -> OmegaConfig {
    OmegaConfig { seed: s.sampling.seed, sampling: s.sampling.clone(), ..OmegaConfig::default() }
}

pub fn omega(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    d.require_metric()?;
    let z = need_point(s, &d)?;
    let mut r = report(s, Some(&d), None);
    let lo = omega_lower_bound(&d, z.coords());
    let hi = omega_upper_bound(&d, z.coords());
    let bounds = if lo == hi { EstimateInterval::exact(lo) } else { EstimateInterval::bounds(lo, hi) };
    r.push(ResultRow::interval("omega", &bounds, REF_OMEGA));
    if let Domain::Ball(_) | Domain::Disk = d {
        r.push(ResultRow::exact("omega_ball", omega_exact_ball(&z)?, REF_OMEGA_BALL));
    }
    if let Domain::Polydisk(_) = d {
        r.push(ResultRow::interval("omega_polydisk", &omega_polydisk_bounds(&z)?, REF_OMEGA_POLY));
    }
    let ocfg = omega_config(s);
    let w = omega_empirical_lower(&d, &z, OmegaKind::Omega, &ocfg)?;
    r.push(ResultRow::with_mode("omega_empirical", w.value, Mode::SampledLower, REF_OMEGA));
    let w0 = omega_empirical_lower(&d, &z, OmegaKind::OmegaZero, &ocfg)?;
    r.push(ResultRow::with_mode("omega0_empirical", w0.value, Mode::SampledLower, REF_OMEGA0));
    r.push(ResultRow::exact("omega0_dilation", w0.dilation, "dilation of the best admitted test function"));
    Ok(r)
}

pub fn rho(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let z = need_point(s, &d)?;
    let mut r = report(s, Some(&d), None);
    r.push(ResultRow::interval("rho", &rho_from_origin(&d, &z, PathOptions::default())?, REF_RHO));
    Ok(r)
}

pub fn boundedness_tables(r: &mut Report, b: &BoundednessReport) {
    let mut t = Table::new(&["r", "max_abs_psi", "max_weighted_q"]);
    for (a, c) in b.sup_profile.iter().zip(&b.criterion_profile) {
        t.push(&[a.0, a.1, c.1]);
    }
    r.tables.insert("shells".into(), t);
    if let Some(dec) = &b.decay {
        r.tables.insert("decay".into(), decay_table(dec));
    }
}

pub fn sigma(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let cfg = &s.sampling;
    let mut r = report(s, Some(&d), Some(&f));
    let sg = sigma_estimate(&d, &f, cfg, SigmaKind::Sigma)?;
    let sg0 = sigma_estimate(&d, &f, cfg, SigmaKind::Sigma0)?;
    r.push(ResultRow::interval("sigma", &sg, REF_SIGMA));
    r.push(ResultRow::interval("sigma0", &sg0, REF_SIGMA0));
    if sg.upper.is_none() {
        let p = sigma_upper_profile(&d, &f, cfg)?;
        r.push(ResultRow::with_mode("sigma_upper_profile", p, Mode::SampledLower, "sup sampled omega_upper(z) Q_psi(z)"));
    }
    let b = boundedness_verdict(&d, &f, cfg, true)?;
    r.verdict("boundedness", b.verdict.as_str());
    if let Some(v) = b.star_verdict {
        r.verdict("boundedness-little", v.as_str());
    }
    if let Some(m) = b.sup_majorant {
        r.push(ResultRow::with_mode("sup_majorant", m, Mode::AnalyticBounds, "sup |psi| <= sum |c| prod M^e"));
    }
    boundedness_tables(&mut r, &b);
    Ok(r)
}

pub fn bounds(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    let nb = norm_bounds(&d, &f, &s.sampling)?;
    r.push(ResultRow::interval("sup_norm", &nb.sup_norm, "||psi||_inf"));
    r.push(ResultRow::interval("bloch_norm", &nb.bloch_norm, REF_NORM));
    r.push(ResultRow::interval("sigma", &nb.sigma, REF_SIGMA));
    r.push(ResultRow::interval("sigma0", &nb.sigma0, REF_SIGMA0));
    r.push(ResultRow::interval("norm_lower", &nb.lower, REF_SANDWICH));
    r.push(ResultRow::interval("norm_upper", &nb.upper, REF_SANDWICH));
    r.push(ResultRow::interval("norm_upper_little", &nb.upper0, REF_SANDWICH));
    Ok(r)
}

pub fn opnorm(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    let battery = BatteryConfig { seed: s.sampling.seed, ..BatteryConfig::default() };
    let o = empirical_opnorm_lower(&d, &f, &battery, &s.sampling)?;
    let nb = norm_bounds(&d, &f, &s.sampling)?;
    let sampled = |v| ResultRow::with_mode("", v, Mode::SampledLower, REF_SANDWICH);
    r.push(ResultRow { name: "opnorm_lower".into(), ..sampled(o.value) });
    r.push(ResultRow { name: "battery_max".into(), ..sampled(o.battery_max) });
    r.push(ResultRow { name: "spectral_radius".into(), ..sampled(o.spectral_radius) });
    r.push(ResultRow::interval("norm_upper", &nb.upper, REF_SANDWICH));
    let gap = nb.upper.upper_or_inf() - o.value;
    r.push(ResultRow::with_mode("gap", gap, Mode::AnalyticBounds, "certified upper minus empirical lower"));
    let mut t = Table::new(&["member", "ratio"]);
    for (i, (_, v)) in o.members.iter().enumerate() {
        t.push(&[i as f64, *v]);
    }
    r.tables.insert("battery".into(), t);
    for (i, (name, _)) in o.members.iter().enumerate() {
        r.verdict(&format!("battery-member-{i:02}"), name.clone());
    }
    Ok(r)
}

pub fn spectrum(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    let c = spectrum_cloud(&d, &f, s.sampling.samples, s.sampling.seed)?;
    let sm = &c.summary;
    let sampled = |name: &str, v| ResultRow::with_mode(name, v, Mode::SampledLower, REF_SPECTRUM);
    r.push(ResultRow::exact("count", sm.count as f64, REF_SPECTRUM));
    r.push(sampled("max_modulus", sm.max_modulus));
    r.push(sampled("hull_area", sm.hull_area));
    for (name, v) in ["re_min", "re_max", "im_min", "im_max"].iter().zip(sm.bbox) {
        r.push(ResultRow::exact(name, v, "bounding box of the sampled range"));
    }
    if let Some(text) = &s.lambda {
        let lam = parse_point(text)?;
        if lam.dim() != 1 {
            return Err(usage("--lambda takes one complex number"));
        }
        let lam = lam.0[0];
        let alpha = c.nearest_distance(lam);
        r.push(ResultRow::exact("nearest_distance", alpha, "distance from lambda to the sampled range"));
        if d.has_metric() {
            let sg = sigma_estimate(&d, &f, &s.sampling, SigmaKind::Sigma)?;
            if let Some(v) = c.resolvent_scale(lam, sg.lower) {
                r.push(ResultRow::with_mode("resolvent_scale", v, Mode::SampledLower, "sigma_psi / alpha^2"));
            }
        }
    }
    let mut t = Table::new(&["re", "im"]);
    for p in &sm.hull {
        t.push(&[p.re, p.im]);
    }
    r.tables.insert("hull".into(), t);
    Ok(r)
}

fn fmt_c(c: Complex64) -> String {
    blochkit::domain::format_complex(c)
}

pub fn compactness(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    let c = compactness_verdict(&d, &f, &s.sampling)?;
    r.verdict("compactness", c.verdict.as_str());
    r.verdict("decided", if c.symbolic { "symbolically" } else { "numerically" });
    match c.witness {
        Some(CompactnessWitness::TwoPoints { a, va, b, vb }) => {
            r.verdict("witness", format!("psi({a}) = {} != psi({b}) = {}", fmt_c(va), fmt_c(vb)));
        }
        Some(CompactnessWitness::NonzeroSingleton { value }) => {
            r.verdict("witness", format!("range is {{{}}} != {{0}}", fmt_c(value)));
        }
        None => {}
    }
    Ok(r)
}

pub fn isometry(s: &Settings) -> Result<Report, CliError> {
    let d = need_domain(s)?;
    let f = need_symbol(s, &d)?;
    let mut r = report(s, Some(&d), Some(&f));
    let rep = isometry_verdict(&d, &f, s.k, &s.sampling)?;
    r.verdict("isometry", rep.verdict.as_str());
    r.push(ResultRow::exact("abs_psi_0", rep.at_origin, "|psi(0)|"));
    if let Some(c) = rep.c_d {
        r.push(ResultRow::exact("c_d", c, REF_CONSTANTS));
    }
    if let Some(t) = rep.threshold {
        r.push(ResultRow::exact("threshold", t, "|psi(0)|^k = 1 - beta_{psi^k} >= 1 - c_D"));
    }
    if let Some(k) = rep.crossing {
        r.push(ResultRow::exact("crossing_k", k as f64, "first k with |psi(0)|^k < 1 - c_D"));
    }
    for (i, nb) in rep.power_norms.iter().enumerate() {
        r.push(ResultRow::interval(&format!("power_norm_{}", i + 1), nb, "||psi^k||_B = 1 for an isometry"));
    }
    for (i, v) in rep.violations.iter().enumerate() {
        r.verdict(&format!("violation-{i:02}"), v.clone());
    }
    let mut t = Table::new(&["k", "abs_psi_0_pow_k"]);
    for (i, p) in rep.powers.iter().enumerate() {
        t.push(&[(i + 1) as f64, *p]);
    }
    r.tables.insert("powers".into(), t);
    Ok(r)
}

pub fn constants(s: &Settings) -> Result<Report, CliError> {
    if s.domain.is_some() {
        let d = need_domain(s)?;
        let mut r = report(s, Some(&d), None);
        let e = bloch_constant_entry(&d)?;
        r.push(ResultRow::exact("c_d", e.value, &e.formula));
        r.verdict("in-class-d", yes_no(in_class_d(&d)?));
        return Ok(r);
    }
    let mut r = report(s, None, None);
    for e in table() {
        r.push(ResultRow::exact(&format!("c_d[{}]", e.descriptor), e.value, &e.formula));
    }
    Ok(r)
}
