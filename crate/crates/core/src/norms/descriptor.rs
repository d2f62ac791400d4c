use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A Young function `Φ: [0, ∞) → [0, ∞]`, non-decreasing, convex, `Φ(0) = 0`.
/// `Φ` may return `f64::INFINITY` past a jump.
#[derive(Clone)]
pub enum YoungFunction {
    /// `u^p`, `p >= 1`.
    Power(f64),
    /// `e^u - 1`.
    ExpMinusOne,
    Custom {
        name: String,
        phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl YoungFunction {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            YoungFunction::Power(p) => u.powf(*p),
            YoungFunction::ExpMinusOne => u.exp_m1(),
            YoungFunction::Custom { phi, .. } => phi(u),
        }
    }

    pub fn name(&self) -> String {
        match self {
            YoungFunction::Power(_) => "u^p".into(),
            YoungFunction::ExpMinusOne => "exp(u)-1".into(),
            YoungFunction::Custom { name, .. } => name.clone(),
        }
    }

    /// `sup{u : Φ(u) <= 1}`, by bisection for custom functions.
    pub fn inverse_at_one(&self) -> f64 {
        match self {
            YoungFunction::Power(_) => 1.0,
            YoungFunction::ExpMinusOne => std::f64::consts::LN_2,
            YoungFunction::Custom { .. } => {
                let mut hi = 1.0;
                while self.eval(hi) <= 1.0 && hi < 1e300 {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                while hi - lo > 1e-15 * hi {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid) <= 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungFunction::Power(p) => write!(f, "u^{p}"),
            _ => f.write_str(&self.name()),
        }
    }
}

/// Which rearrangement-invariant norm to evaluate, with its parameters.
#[derive(Clone, Debug)]
pub enum NormDescriptor {
    L1,
    Linf,
    Lp {
        p: f64,
    },
    /// `q = f64::INFINITY` selects the weak-type `sup_t t^{1/p} X*(t)`.
    Lorentz {
        p: f64,
        q: f64,
    },
    Orlicz(YoungFunction),
    /// `sup_n n·2^n ∫_0^{1/(2^n n!)} X*`.
    Counterexample,
}

impl NormDescriptor {
    pub fn lp(p: f64) -> Result<Self> {
        let d = NormDescriptor::Lp { p };
        d.validate()?;
        Ok(d)
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        let d = NormDescriptor::Lorentz { p, q };
        d.validate()?;
        Ok(d)
    }

    pub fn orlicz_power(p: f64) -> Result<Self> {
        let d = NormDescriptor::Orlicz(YoungFunction::Power(p));
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match self {
            NormDescriptor::Lp { p } if !(p.is_finite() && *p >= 1.0) => bad(format!("Lp needs 1 <= p < inf, got {p}")),
            NormDescriptor::Lorentz { p, q } if !(p.is_finite() && *p > 1.0) => {
                bad(format!("Lorentz needs 1 < p < inf, got p = {p} (q = {q})"))
            }
            NormDescriptor::Lorentz { q, .. } if q.is_nan() || *q < 1.0 => {
                bad(format!("Lorentz needs 1 <= q <= inf, got {q}"))
            }
            NormDescriptor::Orlicz(YoungFunction::Power(p)) if !(p.is_finite() && *p >= 1.0) => {
                bad(format!("Young function u^p needs p >= 1, got {p}"))
            }
            _ => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            NormDescriptor::L1 => "L1",
            NormDescriptor::Linf => "Linf",
            NormDescriptor::Lp { .. } => "Lp",
            NormDescriptor::Lorentz { .. } => "Lorentz",
            NormDescriptor::Orlicz(_) => "Orlicz",
            NormDescriptor::Counterexample => "Counterexample",
        }
    }

    /// Short label including parameters, e.g. `Lorentz(2,inf)`.
    pub fn label(&self) -> String {
        match self {
            NormDescriptor::Lp { p } => format!("Lp({p})"),
            NormDescriptor::Lorentz { p, q } if q.is_infinite() => format!("Lorentz({p},inf)"),
            NormDescriptor::Lorentz { p, q } => format!("Lorentz({p},{q})"),
            NormDescriptor::Orlicz(YoungFunction::Power(p)) => format!("Orlicz(u^{p})"),
            NormDescriptor::Orlicz(phi) => format!("Orlicz({})", phi.name()),
            other => other.kind_name().to_string(),
        }
    }

    /// Whether evaluation always yields an exact rational value.
    pub fn is_exact(&self) -> bool {
        matches!(self, NormDescriptor::L1 | NormDescriptor::Linf | NormDescriptor::Counterexample)
    }

    /// One representative of each of the six kinds plus the `q = ∞` Lorentz
    /// and power-Orlicz variants.
    pub fn panel() -> Vec<NormDescriptor> {
        vec![
            NormDescriptor::L1,
            NormDescriptor::Linf,
            NormDescriptor::Lp { p: 3.0 },
            NormDescriptor::Lorentz { p: 2.0, q: 1.0 },
            NormDescriptor::Lorentz { p: 3.0, q: f64::INFINITY },
            NormDescriptor::Orlicz(YoungFunction::ExpMinusOne),
            NormDescriptor::Orlicz(YoungFunction::Power(2.0)),
            NormDescriptor::Counterexample,
        ]
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            NormDescriptor::Lp { p } => json!({"kind": "Lp", "p": p}),
            NormDescriptor::Lorentz { p, q } if q.is_infinite() => json!({"kind": "Lorentz", "p": p, "q": "inf"}),
            NormDescriptor::Lorentz { p, q } => json!({"kind": "Lorentz", "p": p, "q": q}),
            NormDescriptor::Orlicz(YoungFunction::Power(p)) => json!({"kind": "Orlicz", "phi": "u^p", "p": p}),
            NormDescriptor::Orlicz(phi) => json!({"kind": "Orlicz", "phi": phi.name()}),
            other => json!({"kind": other.kind_name()}),
        }
    }

    /// Parses `{"kind": ..., "p": ..., "q": ..., "phi": "u^p" | "exp(u)-1"}`.
    /// Kind names are case-insensitive; `q` may be the string `"inf"`.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("norm descriptor must be a JSON object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("norm descriptor needs a string `kind`".into()))?;
        let num = |key: &str| -> Result<Option<f64>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Number(n)) => Ok(n.as_f64()),
                Some(Value::String(s)) if s.eq_ignore_ascii_case("inf") => Ok(Some(f64::INFINITY)),
                Some(other) => Err(Error::Parse(format!("`{key}` must be a number, got {other}"))),
            }
        };
        let need =
            |key: &str| -> Result<f64> { num(key)?.ok_or_else(|| Error::Parse(format!("kind {kind} needs `{key}`"))) };
        let d = match kind.to_ascii_lowercase().as_str() {
            "l1" => NormDescriptor::L1,
            "linf" => NormDescriptor::Linf,
            "lp" => NormDescriptor::Lp { p: need("p")? },
            "lorentz" => NormDescriptor::Lorentz { p: need("p")?, q: need("q")? },
            "orlicz" => match obj.get("phi").and_then(Value::as_str) {
                Some("u^p") => NormDescriptor::Orlicz(YoungFunction::Power(need("p")?)),
                Some("exp(u)-1") => NormDescriptor::Orlicz(YoungFunction::ExpMinusOne),
                other => return Err(Error::Parse(format!("unknown Young function {other:?}"))),
            },
            "counterexample" => NormDescriptor::Counterexample,
            other => return Err(Error::Parse(format!("unknown norm kind {other:?}"))),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

impl Serialize for NormDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        NormDescriptor::from_json_value(&v).map_err(D::Error::custom)
    }
}
