//! Job configuration (TOML).

use nlboundary::exact::IntMatrix;
use nlboundary::quadlattice::Lattice;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use std::str::FromStr;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub label: Option<String>,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub cusps: Vec<CuspConfig>,
    /// Holomorphic part `Z^+`; absent means `Z^+ = 0`.
    #[serde(default)]
    pub zplus: Option<Vec<ZPlusTerm>>,
    /// Use the synthetic `Z^+` built from the named type II cusp.
    #[serde(default)]
    pub zplus_synthetic: Option<String>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspConfig {
    pub label: String,
    #[serde(rename = "T")]
    pub t: Vec<Vec<i64>>,
    /// Type II orbit model: `e21 = e21_re + i e21_im`.
    #[serde(default)]
    pub e21_re: Option<Vec<String>>,
    #[serde(default)]
    pub e21_im: Option<Vec<String>>,
    /// Type III orbit model: rational generator of the `V4` line.
    #[serde(default)]
    pub e22: Option<Vec<String>>,
    /// `"g2"` or `"qddq"`: replace this type II cusp's `Z^-` in `check`.
    #[serde(default)]
    pub replacement: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZPlusTerm {
    pub m: String,
    pub class: usize,
    pub value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_m_max")]
    pub m_max: String,
    #[serde(default)]
    pub w_max: Option<String>,
    /// Truncation tolerance for boundary series and lattice sums.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Threshold for slash residuals in `check`.
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
    /// Threshold for the relative slope error in `verify-residue`.
    #[serde(default = "default_residue_tol")]
    pub residue_tol: f64,
    #[serde(default = "default_taus")]
    pub tau_samples: Vec<[f64; 2]>,
    #[serde(default = "default_precision")]
    pub precision: String,
    /// `(m, class)` pairs for `verify-residue`.
    #[serde(default = "default_residue_points")]
    pub residue_points: Vec<(String, usize)>,
    #[serde(default = "default_heights")]
    pub residue_heights: Vec<f64>,
    #[serde(default = "default_y")]
    pub residue_y: f64,
}

fn default_m_max() -> String {
    "12".into()
}
fn default_tol() -> f64 {
    1e-12
}
fn default_residual_tol() -> f64 {
    1e-6
}
fn default_residue_tol() -> f64 {
    0.02
}
fn default_taus() -> Vec<[f64; 2]> {
    vec![[0.0, 1.0], [1.0 / 3.0, 1.0], [0.0, 2.0]]
}
fn default_precision() -> String {
    "f64".into()
}
fn default_residue_points() -> Vec<(String, usize)> {
    vec![("0".into(), 0)]
}
fn default_heights() -> Vec<f64> {
    vec![8.0, 16.0, 32.0, 64.0]
}
fn default_y() -> f64 {
    1.0
}

impl Default for Options {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

pub fn parse_rational(s: &str, what: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("{}: cannot parse {:?} as a rational: {}", what, s, e))
}

pub fn parse_rat_vec(v: &[String], what: &str) -> Result<Vec<BigRational>, String> {
    v.iter().enumerate().map(|(i, s)| parse_rational(s, &format!("{}[{}]", what, i))).collect()
}

pub fn int_matrix(rows: &[Vec<i64>], what: &str) -> Result<IntMatrix, String> {
    let n = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(format!("{}: row {} has {} entries, expected {}", what, i, r.len(), n));
    }
    let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
    Ok(IntMatrix::from_vec(rows.len(), n, data))
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn lattice(&self) -> Result<Lattice, String> {
        let g = int_matrix(&self.gram, "gram")?;
        if g.rows() < 3 {
            return Err(format!("gram: rank {} is below 3", g.rows()));
        }
        Lattice::new(g, self.label.as_deref().unwrap_or("L")).map_err(|e| format!("gram: {}", e))
    }

    pub fn m_max(&self) -> Result<BigRational, String> {
        parse_rational(&self.options.m_max, "options.m_max")
    }

    pub fn w_max(&self) -> Result<Option<BigRational>, String> {
        self.options.w_max.as_deref().map(|s| parse_rational(s, "options.w_max")).transpose()
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, c) in self.cusps.iter().enumerate() {
            if !seen.insert(c.label.as_str()) {
                return Err(format!("cusps[{}]: duplicate label {:?}", i, c.label));
            }
            if c.e21_re.is_some() != c.e21_im.is_some() {
                return Err(format!("cusps[{}]: e21_re and e21_im must be given together", i));
            }
            if c.e21_re.is_some() && c.e22.is_some() {
                return Err(format!("cusps[{}]: give either e21_* or e22, not both", i));
            }
            if let Some(r) = &c.replacement {
                if r != "g2" && r != "qddq" {
                    return Err(format!("cusps[{}].replacement: expected \"g2\" or \"qddq\", got {:?}", i, r));
                }
            }
        }
        if let Some(s) = &self.zplus_synthetic {
            if self.zplus.is_some() {
                return Err("give either zplus or zplus_synthetic, not both".into());
            }
            if !seen.contains(s.as_str()) {
                return Err(format!("zplus_synthetic: no cusp labelled {:?}", s));
            }
        }
        if self.options.precision != "f64" && self.options.precision != "f32" {
            return Err(format!("options.precision: expected \"f64\" or \"f32\", got {:?}", self.options.precision));
        }
        if self.options.tau_samples.iter().any(|t| !(t[1] > 0.0)) {
            return Err("options.tau_samples: every sample needs Im tau > 0".into());
        }
        Ok(())
    }
}
