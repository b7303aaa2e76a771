//! Flat dotted-key configuration: built-in defaults, then an optional
//! `key = value` file, then command-line overrides.

use std::collections::BTreeMap;
use std::path::Path;

use crate::Failure;

/// Every accepted key with its default. `auto` means "derive from the rest".
pub const DEFAULTS: &[(&str, &str)] = &[
    ("params.omega_m", "1"),
    ("params.delta_over_omega_m", "-1.5"),
    ("params.kappa_over_omega_m", "0.1"),
    ("params.gamma_over_kappa", "1e-4"),
    ("params.g_minus_over_omega_m", "0.52"),
    ("params.g_plus_over_omega_m", "auto"),
    ("params.g1_over_kappa", "2e-3"),
    ("params.temperature_over_omega_m", "0"),
    ("params.n_cells", "2"),
    ("params.kappa_cp_over_kappa", "0.1"),
    ("spectrum.points", "4001"),
    ("spectrum.omega_min", "0"),
    ("spectrum.omega_max", "auto"),
    ("map.n_plus", "200"),
    ("map.n_minus", "200"),
    ("map.plus_min", "0"),
    ("map.plus_max", "1"),
    ("map.minus_min", "0"),
    ("map.minus_max", "1"),
    ("map.omega_points", "4001"),
    ("linecut.ratio", "1.187"),
    ("linecut.points", "600"),
    ("linecut.min", "0.4"),
    ("linecut.max", "0.999"),
    ("linecut.omega_points", "4001"),
    ("detuning.min", "auto"),
    ("detuning.max", "auto"),
    ("detuning.points", "201"),
    ("detuning.width_guess", "0.01"),
    ("device.transmission", "0.85"),
    ("device.length", "1"),
    ("device.k1L", "12.1893"),
    ("device.k2L", "14.25639"),
    ("device.q1_over_L", "0.278"),
    ("device.q2_over_L", "0.19568"),
    ("oracle.points", "81"),
    ("oracle.window_over_kappa", "2"),
    ("oracle.max_levels", "60"),
    ("modes.n_cells", "200"),
    ("run.subcommand", "spectrum"),
    ("run.out", "out"),
    ("run.processes", "a,b,c,d,e"),
    ("run.threads", "0"),
    ("run.seed", "0"),
    ("run.plot", "false"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Default for Config {
    fn default() -> Self {
        Config { values: DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }
}

/// Flag spelling to key: `--params.delta-over-omega-m` → `params.delta_over_omega_m`.
/// Keys with capitals (`device.k1L`) are matched case-insensitively.
pub fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().trim_start_matches("--").replace('-', "_");
    DEFAULTS.iter().map(|(d, _)| *d).find(|d| d.eq_ignore_ascii_case(&k))
}

impl Config {
    pub fn set(&mut self, raw_key: &str, value: &str, origin: &str) -> Result<(), Failure> {
        let key = canonical_key(raw_key).ok_or_else(|| Failure::invalid(format!("{origin}: unknown key `{}`", raw_key.trim())))?;
        self.values.insert(key.to_string(), value.trim().trim_matches('"').to_string());
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment, `[section]` headers
    /// prefix the following keys.
    pub fn load_file(&mut self, path: &Path) -> Result<(), Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        let mut section = String::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = format!("{}.", s.trim());
                continue;
            }
            let origin = format!("{}:{}", path.display(), n + 1);
            let (k, v) = line.split_once('=').ok_or_else(|| Failure::invalid(format!("{origin}: expected `key = value`")))?;
            self.set(&format!("{section}{}", k.trim()), v, &origin)?;
        }
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("no default for {key}"))
    }

    pub fn is_auto(&self, key: &str) -> bool {
        self.raw(key).eq_ignore_ascii_case("auto")
    }

    pub fn f64(&self, key: &str) -> Result<f64, Failure> {
        let v: f64 = self.raw(key).parse().map_err(|_| Failure::invalid(format!("{key}: `{}` is not a number", self.raw(key))))?;
        if !v.is_finite() {
            return Err(Failure::invalid(format!("{key}: must be finite")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, Failure> {
        self.raw(key).parse().map_err(|_| Failure::invalid(format!("{key}: `{}` is not a non-negative integer", self.raw(key))))
    }

    pub fn bool(&self, key: &str) -> Result<bool, Failure> {
        match self.raw(key) {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            v => Err(Failure::invalid(format!("{key}: `{v}` is not a boolean"))),
        }
    }

    /// A sample count that can span a range.
    pub fn count(&self, key: &str) -> Result<usize, Failure> {
        let n = self.usize(key)?;
        if n < 2 {
            return Err(Failure::invalid(format!("{key}: need at least 2 points, got {n}")));
        }
        Ok(n)
    }

    /// `(min, max)` with `min < max`.
    pub fn range(&self, min_key: &str, max_key: &str) -> Result<(f64, f64), Failure> {
        let (a, b) = (self.f64(min_key)?, self.f64(max_key)?);
        if !(a < b) {
            return Err(Failure::invalid(format!("{min_key}: empty range [{a}, {b}] ({max_key} must exceed it)")));
        }
        Ok((a, b))
    }
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
