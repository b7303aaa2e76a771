//! One function per subcommand. Each returns tables and derived numbers;
//! writing them out is `output`'s job.

use optoring::device::solve_symmetric_configuration;
use optoring::keldysh::observables::{detuning_profile, i_nl_map, line_cut, local_maxima};
use optoring::keldysh::{NonlinearRing, SelfEnergyModel};
use optoring::lindblad::{auto_truncate, oracle_cavity_dos, ReducedModel};
use optoring::resonance::{allowed_region, resonance_residual, residual_at, resonant_gplus};
use optoring::roots::{bisect, sign_changes};
use optoring::{ModeIndex, PolaritonSpectrum, Process, SystemParams};
use serde_json::{json, Map, Value};

use crate::config::{linspace, Config};
use crate::{Failure, Sub};

/// A table of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|x| num(*x)).collect());
    }
}

pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv(Table),
    Json(Value),
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(&'static str, Artifact)>,
    pub derived: Map<String, Value>,
}

pub fn run(sub: Sub, cfg: &Config) -> Result<Outcome, Failure> {
    match sub {
        Sub::Spectrum => spectrum(cfg),
        Sub::Map => map(cfg),
        Sub::Linecut => linecut(cfg),
        Sub::Detuning => detuning(cfg),
        Sub::Device => device(cfg),
        Sub::OracleCompare => oracle(cfg),
        Sub::Modes => modes(cfg),
    }
}

pub fn processes(cfg: &Config) -> Result<Vec<Process>, Failure> {
    let raw = cfg.raw("run.processes");
    let mut out = Vec::new();
    for tok in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let mut chars = tok.chars();
        let p = match (chars.next(), chars.next()) {
            (Some(c), None) => Process::from_label(c.to_ascii_lowercase()),
            _ => None,
        };
        let p = p.ok_or_else(|| Failure::invalid(format!("run.processes: unknown process `{tok}` (use a,b,c,d,e)")))?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(Failure::invalid("run.processes: no process selected"));
    }
    Ok(out)
}

fn model(cfg: &Config) -> Result<SelfEnergyModel, Failure> {
    Ok(SelfEnergyModel::with_processes(&processes(cfg)?))
}

/// Config key a core violation refers to.
fn key_for(field: &str) -> &'static str {
    match field {
        "omega_m" => "params.omega_m",
        "delta" => "params.delta_over_omega_m",
        "kappa" => "params.kappa_over_omega_m",
        "gamma" => "params.gamma_over_kappa",
        "n_cells" => "params.n_cells",
        "kappa_cp" => "params.kappa_cp_over_kappa",
        "temperature" => "params.temperature_over_omega_m",
        "g2_dressed" => "params.g_plus_over_omega_m",
        "g2_bare" => "params.g1_over_kappa",
        _ => "params",
    }
}

/// Physical parameters from the `params.*` keys; `n_cells` overrides the config.
pub fn system_params(cfg: &Config, n_cells: Option<usize>) -> Result<SystemParams, Failure> {
    let w = cfg.f64("params.omega_m")?;
    let delta = cfg.f64("params.delta_over_omega_m")? * w;
    let kappa = cfg.f64("params.kappa_over_omega_m")? * w;
    let gm = cfg.f64("params.g_minus_over_omega_m")? * w;
    if !(w > 0.0) {
        return Err(Failure::invalid("params.omega_m: must be positive"));
    }
    if !(delta < 0.0) {
        return Err(Failure::invalid("params.delta_over_omega_m: must be negative"));
    }
    let gc = optoring::params::critical_coupling(w, delta);
    let gp = if cfg.is_auto("params.g_plus_over_omega_m") {
        if gm.abs() >= gc {
            return Err(optoring::Error::Unstable(format!("G- = {gm:.6} not below G_cri = {gc:.6}")).into());
        }
        resonant_gplus(Process::E, w, delta, gm).ok_or_else(|| {
            Failure::invalid(format!(
                "params.g_plus_over_omega_m: auto needs G- inside the (e) resonance region at this detuning, got G-/G_cri = {:.4}",
                gm / gc
            ))
        })?
    } else {
        cfg.f64("params.g_plus_over_omega_m")? * w
    };
    let p = SystemParams {
        omega_m: w,
        kappa,
        gamma: cfg.f64("params.gamma_over_kappa")? * kappa,
        temperature: cfg.f64("params.temperature_over_omega_m")? * w,
        n_cells: match n_cells {
            Some(n) => n,
            None => cfg.usize("params.n_cells")?,
        },
        kappa_cp: cfg.f64("params.kappa_cp_over_kappa")? * kappa,
        ..SystemParams::from_gpm(delta, gp, gm)
    }
    .with_bare_g1(cfg.f64("params.g1_over_kappa")? * kappa);
    if let Some(v) = p.validate().first() {
        return Err(Failure::invalid(format!("{}: {}", key_for(v.field), v.message)));
    }
    p.stability_check()?;
    Ok(p)
}

fn opt(x: Option<f64>) -> Value {
    x.filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

/// Couplings, λ and per-process resonance information for a parameter set.
fn describe(p: &SystemParams) -> Map<String, Value> {
    let d = p.derived();
    let mut m = Map::new();
    m.insert("g_cri".into(), json!(d.g_cri));
    m.insert("lambda".into(), json!(d.lambda));
    m.insert("g_plus".into(), json!(d.g_plus));
    m.insert("g_minus".into(), json!(d.g_minus));
    m.insert("G1".into(), json!(p.g1_dressed));
    m.insert("G2".into(), json!(p.g2_dressed));
    m.insert("g1".into(), json!(p.g1_bare));
    m.insert("g2".into(), json!(p.g2_bare));
    let mut res = Map::new();
    let mut regions = Map::new();
    for q in Process::ALL {
        let key = q.label().to_string();
        res.insert(key.clone(), opt(resonance_residual(p, q)));
        let r = allowed_region(q, p.omega_m, p.delta);
        regions.insert(
            key,
            r.map_or(Value::Null, |r| json!({ "g_minus_min_over_gcri": r.g_minus_min / d.g_cri, "g_minus_max_over_gcri": r.g_minus_max / d.g_cri })),
        );
    }
    m.insert("residuals".into(), Value::Object(res));
    m.insert("regions".into(), Value::Object(regions));
    m
}

fn mode_summary(ring: &NonlinearRing) -> Value {
    let w = ring.params().omega_m;
    let mut m = Map::new();
    for (idx, d) in ring.spec.modes() {
        m.insert(idx.label(ring.spec.n_cells()), json!({ "omega": d.omega / w, "kappa": d.kappa / w, "n": d.n_occ }));
    }
    Value::Object(m)
}

fn spectrum(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, None)?;
    let ring = NonlinearRing::with_model(&p, model(cfg)?)?;
    let w = p.omega_m;
    let n = cfg.count("spectrum.points")?;
    let lo = cfg.f64("spectrum.omega_min")?;
    let hi = if cfg.is_auto("spectrum.omega_max") {
        2.0 * ring.spec.omega(ModeIndex::PLUS_2PI) / w
    } else {
        cfg.f64("spectrum.omega_max")?
    };
    if !(lo < hi) {
        return Err(Failure::invalid(format!("spectrum.omega_min: empty range [{lo}, {hi}]")));
    }
    let grid: Vec<f64> = linspace(lo * w, hi * w, n);
    let s = ring.spectrum(&grid, p.kappa_cp);
    let mut t = Table::new(&["omega_over_omega_m", "rho0", "rho", "r2_linear", "r2_nonlinear"]);
    for (i, x) in grid.iter().enumerate() {
        t.push(&[x / w, s.rho_linear[i] * w, s.rho_nonlinear[i] * w, s.reflectivity_linear[i], s.reflectivity_nonlinear[i]]);
    }
    let mut derived = describe(&p);
    derived.insert("c_eff".into(), json!(ring.effective_cooperativity()));
    derived.insert("i_nl".into(), json!(ring.nonlinearity_strength(&ring.default_grid(n))));
    derived.insert("modes".into(), mode_summary(&ring));
    Ok(Outcome { files: vec![("spectrum.csv", Artifact::Csv(t))], derived })
}

/// Cell centres of `n` equal cells on `[a, b]`.
fn centres(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
}

fn map(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, Some(2))?;
    let gc = p.g_cri();
    let (pa, pb) = cfg.range("map.plus_min", "map.plus_max")?;
    let (ma, mb) = cfg.range("map.minus_min", "map.minus_max")?;
    let gps = centres(pa, pb, cfg.count("map.n_plus")?);
    let gms = centres(ma, mb, cfg.count("map.n_minus")?);
    let abs = |v: &[f64]| v.iter().map(|x| x * gc).collect::<Vec<_>>();
    let cells = i_nl_map(&p, &abs(&gps), &abs(&gms), cfg.count("map.omega_points")?, &model(cfg)?)?;
    let mut t = Table::new(&["g_plus_over_gcri", "g_minus_over_gcri", "i_nl"]);
    for c in &cells {
        t.push(&[c.g_plus / gc, c.g_minus / gc, c.i_nl]);
    }
    let best = cells.iter().max_by(|a, b| a.i_nl.total_cmp(&b.i_nl)).expect("non-empty map");

    let mut atlas = Table::new(&["process", "g_minus_over_gcri", "g_plus_over_gcri"]);
    for q in processes(cfg)? {
        let Some(r) = allowed_region(q, p.omega_m, p.delta) else { continue };
        for gm in linspace(r.g_minus_min, r.g_minus_max, 1000) {
            if let Some(gp) = resonant_gplus(q, p.omega_m, p.delta, gm) {
                atlas.rows.push(vec![q.label().to_string(), num(gm / gc), num(gp / gc)]);
            }
        }
    }
    let mut derived = describe(&p);
    derived.insert("i_nl_max".into(), json!({ "value": best.i_nl, "g_plus_over_gcri": best.g_plus / gc, "g_minus_over_gcri": best.g_minus / gc }));
    Ok(Outcome { files: vec![("map.csv", Artifact::Csv(t)), ("atlas.csv", Artifact::Csv(atlas))], derived })
}

/// `G_-/G_cri` where the cut `G_- = ratio G_+` crosses each resonance.
fn cut_crossings(q: Process, p: &SystemParams, ratio: f64, lo: f64, hi: f64) -> Vec<f64> {
    let f = |gm: f64| residual_at(q, p.omega_m, p.delta, gm, gm / ratio).unwrap_or(f64::NAN);
    sign_changes(f, lo, hi, 4000)
        .into_iter()
        .filter_map(|(a, b)| bisect(f, a, b, 1e-14).ok())
        .filter(|&gm| resonant_gplus(q, p.omega_m, p.delta, gm).is_some_and(|gp| (gp - gm / ratio).abs() < 1e-8))
        .map(|gm| gm / p.g_cri())
        .collect()
}

fn linecut(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, Some(2))?;
    let gc = p.g_cri();
    let ratio = cfg.f64("linecut.ratio")?;
    if !(ratio > 0.0) {
        return Err(Failure::invalid("linecut.ratio: must be positive"));
    }
    let (lo, hi) = cfg.range("linecut.min", "linecut.max")?;
    let gms: Vec<f64> = linspace(lo * gc, hi * gc, cfg.count("linecut.points")?);
    let cut = line_cut(&p, ratio, &gms, cfg.count("linecut.omega_points")?, &model(cfg)?)?;
    let mut t = Table::new(&["g_minus_over_gcri", "g_plus_over_gcri", "i_nl"]);
    for c in &cut {
        t.push(&[c.g_minus / gc, c.g_plus / gc, c.i_nl]);
    }
    let y: Vec<f64> = cut.iter().map(|c| c.i_nl).collect();
    let peaks: Vec<Value> = local_maxima(&y, 0.0)
        .into_iter()
        .map(|i| json!({ "g_minus_over_gcri": cut[i].g_minus / gc, "g_plus_over_gcri": cut[i].g_plus / gc, "i_nl": cut[i].i_nl }))
        .collect();
    let mut crossings = Map::new();
    for q in Process::ALL {
        crossings.insert(q.label().to_string(), json!(cut_crossings(q, &p, ratio, lo * gc, hi * gc)));
    }
    let mut derived = describe(&p);
    derived.insert("peaks".into(), Value::Array(peaks));
    derived.insert("crossings_g_minus_over_gcri".into(), Value::Object(crossings));
    Ok(Outcome { files: vec![("linecut.csv", Artifact::Csv(t))], derived })
}

fn detuning(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, Some(2))?;
    let w = p.omega_m;
    let d0 = p.delta / w;
    let lo = if cfg.is_auto("detuning.min") { d0 - 0.05 } else { cfg.f64("detuning.min")? };
    let hi = if cfg.is_auto("detuning.max") { d0 + 0.05 } else { cfg.f64("detuning.max")? };
    if !(lo < hi) {
        return Err(Failure::invalid(format!("detuning.min: empty range [{lo}, {hi}]")));
    }
    if !(hi < 0.0) {
        return Err(Failure::invalid("detuning.max: detunings must stay negative"));
    }
    let deltas: Vec<f64> = linspace(lo * w, hi * w, cfg.count("detuning.points")?);
    for &d in &deltas {
        SystemParams { delta: d, ..p }.stability_check()?;
    }
    let prof = detuning_profile(&p, &deltas, cfg.f64("detuning.width_guess")? * w)?;
    let mut t = Table::new(&["delta_over_omega_m", "c_eff", "r2_min_nonlinear", "r2_min_linear", "delta_r2_min"]);
    for s in &prof.samples {
        t.push(&[s.delta / w, s.c_eff, s.min_reflectivity, s.min_reflectivity_linear, s.min_reflectivity - s.min_reflectivity_linear]);
    }
    let mut derived = describe(&p);
    let f = prof.fit;
    derived.insert("fit".into(), json!({ "center_over_omega_m": f.center / w, "width_over_omega_m": f.width / w, "amplitude": f.amplitude, "rms": f.rms }));
    derived.insert("reflectivity_peak_over_omega_m".into(), json!(prof.reflectivity_peak() / w));
    Ok(Outcome { files: vec![("detuning.csv", Artifact::Csv(t))], derived })
}

fn device(cfg: &Config) -> Result<Outcome, Failure> {
    let length = cfg.f64("device.length")?;
    if !(length > 0.0) {
        return Err(Failure::invalid("device.length: must be positive"));
    }
    let tr = cfg.f64("device.transmission")?;
    if !(tr > 0.0 && tr < 1.0) {
        return Err(Failure::invalid("device.transmission: must lie in (0, 1)"));
    }
    let guess = [cfg.f64("device.k1L")?, cfg.f64("device.k2L")?, cfg.f64("device.q1_over_L")?, cfg.f64("device.q2_over_L")?];
    let s = solve_symmetric_configuration(length, tr, guess)?;
    let doc = json!({
        "k1L": s.k1 * length,
        "k2L": s.k2 * length,
        "q1_over_L": s.config.q1 / length,
        "q2_over_L": s.config.q2 / length,
        "g11": s.g11,
        "g12": s.g12,
        "g21": s.g21,
        "g22": s.g22,
        "ratio_gminus_gplus": s.ratio,
    });
    let mut derived = Map::new();
    derived.insert("residual".into(), json!(s.residual));
    derived.insert("iterations".into(), json!(s.iterations));
    derived.insert("ratio_gminus_gplus".into(), json!(s.ratio));
    Ok(Outcome { files: vec![("device.json", Artifact::Json(doc))], derived })
}

fn oracle(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, Some(2))?;
    let ring = NonlinearRing::with_model(&p, model(cfg)?)?;
    let start = ReducedModel::from_spectrum(&ring.spec, &ring.couplings, 2, 2)?;
    let cert = auto_truncate(start, cfg.usize("oracle.max_levels")?)?;
    let m = ring.spec.mode(ModeIndex::MINUS_2PI);
    let half = cfg.f64("oracle.window_over_kappa")?;
    if !(half > 0.0) {
        return Err(Failure::invalid("oracle.window_over_kappa: must be positive"));
    }
    let ws = linspace(m.omega - half * m.kappa, m.omega + half * m.kappa, cfg.count("oracle.points")?);
    let o = oracle_cavity_dos(&ring.spec, &cert.model, &cert.steady, &ws)?;
    let w = p.omega_m;
    let mut t = Table::new(&["omega_over_omega_m", "rho0", "rho_keldysh", "rho_oracle"]);
    let mut worst = 0.0f64;
    for (&x, &d) in ws.iter().zip(&o.dos) {
        let k = ring.dos(x);
        worst = worst.max((d - k).abs() / k.abs());
        t.push(&[x / w, ring.linear_dos(x) * w, k * w, d * w]);
    }
    let mut derived = describe(&p);
    derived.insert("cutoffs".into(), json!([cert.model.n_max_1, cert.model.n_max_2]));
    derived.insert("top_level_populations".into(), json!([cert.top_population.0, cert.top_population.1]));
    derived.insert("max_relative_deviation".into(), json!(worst));
    Ok(Outcome { files: vec![("oracle.csv", Artifact::Csv(t))], derived })
}

fn modes(cfg: &Config) -> Result<Outcome, Failure> {
    let p = system_params(cfg, Some(cfg.usize("modes.n_cells")?))?;
    let s = PolaritonSpectrum::new(&p)?;
    let w = p.omega_m;
    let mut t = Table::new(&["j", "k_over_pi", "g_k", "omega_minus", "omega_plus", "kappa_minus", "kappa_plus", "n_minus", "n_plus"]);
    for pt in &s.points {
        t.push(&[
            pt.j as f64,
            pt.k / std::f64::consts::PI,
            pt.transform.g_k / w,
            pt.minus.omega / w,
            pt.plus.omega / w,
            pt.minus.kappa / w,
            pt.plus.kappa / w,
            pt.minus.n_occ,
            pt.plus.n_occ,
        ]);
    }
    let mut derived = describe(&p);
    derived.insert("n_cells".into(), json!(p.n_cells));
    derived.insert("max_frequency_over_omega_m".into(), json!(s.max_frequency() / w));
    Ok(Outcome { files: vec![("modes.csv", Artifact::Csv(t))], derived })
}
