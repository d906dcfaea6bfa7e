//! Closed-form calculators: coupling thresholds `J*` and decay ratios α per
//! graph family, non-asymptotic ν_max bounds, and necessary-sample bounds.

use serde::{Deserialize, Serialize, Serializer};

use crate::combinatorics::{ln_binomial, ln_factorial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DegreeBounded,
    GirthBounded,
    RandomRegular,
    ErdosRenyi,
    SmallWorld,
    LocalPath,
    Augmented,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "degree_bounded" | "degree" => Family::DegreeBounded,
            "girth_bounded" | "girth" => Family::GirthBounded,
            "random_regular" | "regular" => Family::RandomRegular,
            "erdos_renyi" | "er" => Family::ErdosRenyi,
            "small_world" | "ws" => Family::SmallWorld,
            "local_path" | "lp" => Family::LocalPath,
            "augmented" => Family::Augmented,
            _ => return Err(Error::InvalidParameter(format!("unknown family `{s}`"))),
        })
    }
}

/// Parameters of a graph family. Only the fields a family needs must be set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    #[serde(default)]
    pub p: Option<f64>,
    /// Maximum degree Δ.
    #[serde(default)]
    pub delta_max: Option<f64>,
    #[serde(default)]
    pub delta_min: Option<f64>,
    /// Girth.
    #[serde(default)]
    pub g: Option<f64>,
    /// Average degree of the random part.
    #[serde(default)]
    pub c: Option<f64>,
    /// Degree of the local graph.
    #[serde(default)]
    pub d: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Edge count.
    #[serde(default)]
    pub k: Option<f64>,
    #[serde(default)]
    pub l: Option<u64>,
    #[serde(default)]
    pub j_max: Option<f64>,
}

impl FamilyParams {
    pub fn new(family: Family) -> Self {
        FamilyParams {
            family,
            p: None,
            delta_max: None,
            delta_min: None,
            g: None,
            c: None,
            d: None,
            eta: None,
            gamma: None,
            k: None,
            l: None,
            j_max: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("family parameters: {e}")))
    }
}

fn need<T: Copy>(value: Option<T>, name: &str, family: Family) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("{family:?} needs `{name}`")))
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// A coupling threshold; infinite for degree-bounded graphs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JStar {
    #[serde(serialize_with = "serialize_extended")]
    pub value: f64,
    pub notes: Vec<String>,
}

/// `atanh(1/x)`, infinite at `x = 1`.
fn atanh_inverse(x: f64, what: &str) -> Result<JStar> {
    if !(x >= 1.0) {
        return Err(Error::DegenerateFamily(format!(
            "{what} = {x} < 1 puts the coupling threshold outside the real line"
        )));
    }
    if x == 1.0 {
        return Ok(JStar {
            value: f64::INFINITY,
            notes: vec![format!("{what} = 1: atanh(1) is infinite, no coupling constraint")],
        });
    }
    Ok(JStar {
        value: (1.0 / x).atanh(),
        notes: Vec::new(),
    })
}

pub fn j_star(params: &FamilyParams) -> Result<JStar> {
    let fam = params.family;
    match fam {
        Family::DegreeBounded => Ok(JStar {
            value: f64::INFINITY,
            notes: Vec::new(),
        }),
        Family::GirthBounded | Family::RandomRegular => {
            atanh_inverse(need(params.delta_max, "delta_max", fam)?, "delta_max")
        }
        Family::ErdosRenyi | Family::SmallWorld => atanh_inverse(need(params.c, "c", fam)?, "c"),
        Family::LocalPath | Family::Augmented => {
            let mut r = atanh_inverse(need(params.delta_max, "delta_max", fam)?, "delta_max")?;
            r.notes
                .push("threshold known only up to a constant; atanh(1/delta_max) is a convention".into());
            Ok(r)
        }
    }
}

/// `tanh(J_max) / tanh(J*)`; an infinite `J*` gives `tanh(J_max)`.
pub fn alpha(j_max: f64, j_star: f64) -> Result<f64> {
    if !(j_max > 0.0 && j_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("j_max must be positive, got {j_max}")));
    }
    if !(j_star > 0.0) {
        return Err(Error::InvalidParameter(format!("j_star must be positive, got {j_star}")));
    }
    Ok(j_max.tanh() / j_star.tanh())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: Family,
    #[serde(serialize_with = "serialize_extended")]
    pub j_star: f64,
    pub alpha: Option<f64>,
    /// Conditioning-set size the ν_max bound refers to.
    pub eta: Option<f64>,
    pub nu_max_bound: Option<f64>,
    /// Probability the bound holds, clamped to `[0, 1]`.
    pub bound_probability: Option<f64>,
    /// The same before clamping.
    pub raw_probability: Option<f64>,
    pub notes: Vec<String>,
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

pub fn nu_max_bound(params: &FamilyParams) -> Result<BoundReport> {
    let fam = params.family;
    let js = j_star(params)?;
    let mut report = BoundReport {
        family: fam,
        j_star: js.value,
        alpha: None,
        eta: None,
        nu_max_bound: None,
        bound_probability: None,
        raw_probability: None,
        notes: js.notes,
    };
    let alpha_value = || params.j_max.map(|j| alpha(j, js.value)).transpose();
    if params.j_max.is_none() && fam != Family::DegreeBounded {
        report.notes.push("j_max not given: alpha and the nu_max bound are omitted".into());
    }

    match fam {
        Family::DegreeBounded => {
            report.alpha = alpha_value()?;
            report.eta = params.delta_max;
            report.nu_max_bound = Some(0.0);
            report.bound_probability = Some(1.0);
            report.raw_probability = Some(1.0);
        }
        Family::GirthBounded => {
            let g = need(params.g, "g", fam)?;
            let a = alpha_value()?;
            report.alpha = a;
            report.eta = Some(1.0);
            report.nu_max_bound = a.map(|a| a.powf(g / 2.0));
            report.bound_probability = Some(1.0);
            report.raw_probability = Some(1.0);
        }
        Family::RandomRegular => {
            let delta = need(params.delta_max, "delta_max", fam)?;
            let p = need(params.p, "p", fam)?;
            let l = need(params.l, "l", fam)?;
            let lf = l as f64;
            let limit = 0.25 * (0.25 * p * delta + 0.5 - delta * delta);
            if l == 0 || lf >= limit {
                return Err(Error::InvalidParameter(format!(
                    "need 1 <= l < 0.25(0.25 p delta + 0.5 - delta^2) = {limit}, got l = {l}"
                )));
            }
            let base = p * delta - 4.0 * delta * delta - 16.0 * lf;
            if base <= 0.0 {
                return Err(Error::VacuousBound {
                    term: format!("p*delta - 4*delta^2 - 16*l = {base}"),
                });
            }
            let a = alpha_value()?;
            let ln_fail = (16.0 * lf - 2.0) * delta.ln() - (8.0 * lf - 1.0) * base.ln();
            let raw = 1.0 - ln_fail.exp();
            report.alpha = a;
            report.eta = Some(2.0);
            report.nu_max_bound = a.map(|a| a.powf(lf));
            report.raw_probability = Some(raw);
            report.bound_probability = Some(clamp01(raw));
        }
        Family::ErdosRenyi | Family::SmallWorld => {
            let p = need(params.p, "p", fam)?;
            let c = need(params.c, "c", fam)?;
            let l = need(params.l, "l", fam)?;
            if c <= 1.0 {
                return Err(Error::InvalidParameter(format!("the bound needs c > 1, got {c}")));
            }
            let lf = l as f64;
            let limit = p.ln() / (4.0 * c.ln());
            if l == 0 || lf >= limit {
                return Err(Error::InvalidParameter(format!(
                    "need 1 <= l < log p / (4 log c) = {limit}, got l = {l}"
                )));
            }
            let a = alpha_value()?;
            let (scale, c_power, eta) = if fam == Family::ErdosRenyi {
                (2.0, 4.0 * lf + 1.0, 2.0)
            } else {
                (4.0, 4.0 * lf - 1.0, need(params.d, "d", fam)? + 2.0)
            };
            let walk_term = (lf.ln() + 125f64.sqrt() - 2.5 * p.ln()).exp();
            let cycle_term = (ln_factorial(l) + c_power * c.ln() - p.ln()).exp();
            let raw = 1.0 - walk_term - cycle_term;
            report.alpha = a;
            report.eta = Some(eta);
            report.nu_max_bound = a.map(|a| scale * lf.powi(3) * a.powf(lf) * p.ln());
            report.raw_probability = Some(raw);
            report.bound_probability = Some(clamp01(raw));
            if raw < 0.0 {
                report.notes.push(format!("probability expression is {raw:.6}; clamped to 0"));
            }
        }
        Family::LocalPath | Family::Augmented => {
            report.alpha = alpha_value()?;
            report.eta = params.eta;
            report.notes.push("no closed-form nu_max bound for this family".into());
        }
    }
    Ok(report)
}

/// Fano-type necessary sample sizes `(n_exact, n_weakened)` for graphs with
/// average degree `c` over an alphabet of the given size.
pub fn fano_lower_bound(p: usize, c: f64, alphabet_size: usize) -> Result<(f64, f64)> {
    let pf = p as f64;
    if !(c > 0.0 && c < pf) {
        return Err(Error::InvalidParameter(format!("need 0 < c < p, got c = {c}, p = {p}")));
    }
    if alphabet_size < 2 {
        return Err(Error::InvalidParameter("alphabet size must be at least 2".into()));
    }
    let log2_x = (alphabet_size as f64).log2();
    let q = c / pf;
    let hb = -q * q.log2() - (1.0 - q) * (1.0 - q).log2();
    let pairs = pf * (pf - 1.0) / 2.0;
    let exact = pairs * hb / (pf * log2_x);
    let weakened = c * pf.log2() / (2.0 * log2_x);
    Ok((exact, weakened))
}

/// Whether `n <= eps · c · ln p`, the regime where estimation fails with
/// probability tending to one.
pub fn strong_converse_regime(n: u64, p: usize, c: f64, eps: f64) -> Result<bool> {
    if c > 0.5 * p as f64 {
        return Err(Error::PreconditionViolation(format!("need c <= p/2, got c = {c}, p = {p}")));
    }
    if eps < 0.0 || c < 0.0 {
        return Err(Error::InvalidParameter("eps and c must be non-negative".into()));
    }
    Ok((n as f64) <= eps * c * (p as f64).ln())
}

/// Lower bound `max(0, 1 − 2^{np − log2|ensemble|})` on the error of any
/// estimator for a graph drawn uniformly from an ensemble.
pub fn uniform_ensemble_error_bound(n: u64, p: usize, log2_ensemble_size: f64) -> Result<f64> {
    if !(log2_ensemble_size >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "log2 ensemble size must be non-negative, got {log2_ensemble_size}"
        )));
    }
    let exponent = n as f64 * p as f64 - log2_ensemble_size;
    if exponent >= 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - exponent.exp2())
}

/// Natural-log cardinality bounds of a graph family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountBounds {
    pub log_lower: f64,
    pub log_upper: f64,
    pub notes: Vec<String>,
}

fn ln_positive(x: f64, term: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(x.ln())
    } else {
        Err(Error::VacuousBound {
            term: format!("{term} = {x}"),
        })
    }
}

fn flag(notes: &mut Vec<String>, name: &str, v: f64) {
    if v < 0.0 {
        notes.push(format!("{name} = {v} is negative; the bound is vacuous"));
    } else if v.fract() != 0.0 {
        notes.push(format!("{name} = {v} is not an integer"));
    }
}

pub fn ensemble_count_bounds(params: &FamilyParams) -> Result<CountBounds> {
    let fam = params.family;
    let p = need(params.p, "p", fam)?;
    let k = need(params.k, "k", fam)?;
    let dmax = need(params.delta_max, "delta_max", fam)?;
    let dmin = need(params.delta_min, "delta_min", fam)?;
    let lnp = p.ln();
    let mut notes = Vec::new();
    match fam {
        Family::GirthBounded => {
            let g = need(params.g, "g", fam)?;
            let lower = k * lnp + k * ln_positive(p - g * dmax.powf(g), "p - g*delta_max^g")?;
            let upper = k * lnp + k * ln_positive(p - dmin.powf(g), "p - delta_min^g")?;
            Ok(CountBounds {
                log_lower: lower,
                log_upper: upper,
                notes,
            })
        }
        Family::LocalPath | Family::Augmented => {
            let eta = need(params.eta, "eta", fam)?;
            let gamma = need(params.gamma, "gamma", fam)?;
            let reach_max = gamma * dmax.powf(gamma);
            let reach_min = dmin.powf(gamma);
            let m1 = p / reach_max;
            let m2 = p / reach_min;
            let mut k1 = k - m2 * (eta - 1.0);
            let mut k2 = k - m1 * (eta - 1.0);
            let mut extra = 0.0;
            if fam == Family::Augmented {
                let d = need(params.d, "d", fam)?;
                k1 += 1.0 - p * d / 2.0;
                k2 += 1.0 - p * d / 2.0;
                extra = ln_binomial(p - 1.0, d);
            }
            for (name, v) in [("m1", m1), ("m2", m2), ("k1", k1), ("k2", k2)] {
                flag(&mut notes, name, v);
            }
            let pair_term = |x: f64, name: &str| -> Result<f64> {
                if eta == 1.0 {
                    Ok(0.0)
                } else {
                    Ok((eta - 1.0) * ln_positive(x * (x - 1.0) / 2.0, name)?)
                }
            };
            let lower = ln_positive(m1, "m1")?
                + k1 * lnp
                + k1 * ln_positive(p - reach_max, "p - gamma*delta_max^gamma")?
                + pair_term(reach_min, "C(delta_min^gamma, 2)")?
                + extra;
            let upper = ln_positive(m2, "m2")?
                + k2 * lnp
                + k2 * ln_positive(p - reach_min, "p - delta_min^gamma")?
                + pair_term(reach_max, "C(gamma*delta_max^gamma, 2)")?
                + extra;
            Ok(CountBounds {
                log_lower: lower,
                log_upper: upper,
                notes,
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "cardinality bounds cover girth_bounded, local_path and augmented, not {other:?}"
        ))),
    }
}

/// Approximate necessary sample size implied by the cardinality bounds.
pub fn necessary_samples(params: &FamilyParams) -> Result<f64> {
    let fam = params.family;
    let p = need(params.p, "p", fam)?;
    let k = need(params.k, "k", fam)?;
    let coefficient = match fam {
        Family::GirthBounded => k / p,
        Family::LocalPath | Family::Augmented => {
            let eta = need(params.eta, "eta", fam)?;
            let gamma = need(params.gamma, "gamma", fam)?;
            let dmin = need(params.delta_min, "delta_min", fam)?;
            let mut coef = k / p - (eta - 1.0) / dmin.powf(gamma);
            if fam == Family::Augmented {
                coef -= need(params.d, "d", fam)? / 2.0;
            }
            coef
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "necessary sample size covers girth_bounded, local_path and augmented, not {other:?}"
            )))
        }
    };
    Ok((coefficient * p.ln()).max(0.0))
}
