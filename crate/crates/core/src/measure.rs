//! Overlap measures: nonnegative scores of a (sub)distribution `q` against a
//! target `p`, uniquely maximized at `q = p`.
//!
//! Four families are supported:
//!
//! | kind | value |
//! |------|-------|
//! | squared Hellinger | `Σ √(p(x) q(x))` |
//! | power(β) | `Σ p(x)^(1-β) q(x)^β` |
//! | f-divergence | `d* − Σ f(p(x)/q(x)) q(x)` |
//! | concave(h) | `Σ h(q(x)) / h'(p(x))` |
//!
//! All of them accept any nonnegative `q`; the set-function extensions in
//! [`crate::objective`] feed them partially built lists.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Anything that scores a candidate `q` against a target `p` (dense vectors in
/// genre order).
///
/// Implemented by [`OverlapMeasure`] and by pseudo-measures used as negative
/// controls in the property checkers.
pub trait Overlap: Send + Sync {
    fn overlap(&self, p: &[f64], q: &[f64]) -> f64;

    /// Fails if the measure is undefined for this target.
    fn check_target(&self, _p: &[f64]) -> Result<()> {
        Ok(())
    }

    fn label(&self) -> String;
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `D_f(p, q) = Σ f(p/q) q` turned into an overlap `d* − D_f`.
#[derive(Clone)]
pub struct FDivergence {
    name: String,
    f: RealFn,
    d_star: f64,
    slope_at_infinity: f64,
}

impl FDivergence {
    /// `f` must be convex with `f(1) = 0`. The term at `q(x) = 0` is the limit
    /// `p(x) · lim f(t)/t`; generators whose limit diverges are rejected.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d_star: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !d_star.is_finite() || d_star <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!("d* = {d_star} must be positive and finite")));
        }
        let f1 = f(1.0);
        if !f1.is_finite() || f1.abs() > 1e-12 {
            return Err(Error::ParameterOutOfRange(format!("{name}: f(1) = {f1}, expected 0")));
        }
        if !f(0.0).is_finite() {
            return Err(Error::UnboundedDivergence(name));
        }
        let near = f(1e9) / 1e9;
        let far = f(1e12) / 1e12;
        if !near.is_finite() || !far.is_finite() || (far - near).abs() > 1e-3 * near.abs().max(1.0) {
            return Err(Error::UnboundedDivergence(name));
        }
        Ok(FDivergence { name, f: Arc::new(f), d_star, slope_at_infinity: far })
    }

    /// `f(t) = (√t − 1)²`.
    pub fn hellinger(d_star: f64) -> Result<Self> {
        Self::new("hellinger", |t: f64| (t.sqrt() - 1.0).powi(2), d_star)
    }

    /// `f(t) = |t − 1| / 2`.
    pub fn total_variation(d_star: f64) -> Result<Self> {
        Self::new("tv", |t: f64| (t - 1.0).abs() / 2.0, d_star)
    }

    /// `f(t) = t ln t`. Always rejected as unbounded; kept so callers get a
    /// proper error instead of a silently infinite objective.
    pub fn kl(d_star: f64) -> Result<Self> {
        Self::new("kl", |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() }, d_star)
    }

    pub fn d_star(&self) -> f64 {
        self.d_star
    }

    /// `D_f(p, q)` with the zero-mass conventions described on [`FDivergence::new`].
    pub fn divergence(&self, p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .map(|(&pi, &qi)| {
                if qi > 0.0 {
                    (self.f)(pi / qi) * qi
                } else if pi > 0.0 {
                    pi * self.slope_at_infinity
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// `G^h(p, q) = Σ h(q(x)) / h'(p(x))` for a nonnegative, non-decreasing,
/// concave `h`.
#[derive(Clone)]
pub struct ConcaveFamily {
    name: String,
    h: RealFn,
    h_prime: RealFn,
}

impl ConcaveFamily {
    pub fn new(
        name: impl Into<String>,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        h_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ConcaveFamily { name: name.into(), h: Arc::new(h), h_prime: Arc::new(h_prime) }
    }

    /// `h(x) = x^β`, `β ∈ (0, 1)`; gives `(1/β) Σ p^(1-β) q^β`.
    pub fn root(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self::new(
            format!("root:{beta}"),
            move |x: f64| x.powf(beta),
            move |x: f64| if x == 0.0 { f64::INFINITY } else { beta * x.powf(beta - 1.0) },
        ))
    }

    /// `h(x) = ln(1 + x)`.
    pub fn log1p() -> Self {
        Self::new("log1p", |x: f64| x.ln_1p(), |x: f64| 1.0 / (1.0 + x))
    }

    /// `h(x) = 1 − e^(−c x)`, `c > 0`.
    pub fn saturating(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::ParameterOutOfRange(format!("saturation rate {c} must be positive")));
        }
        Ok(Self::new(
            format!("exp:{c}"),
            move |x: f64| 1.0 - (-c * x).exp(),
            move |x: f64| c * (-c * x).exp(),
        ))
    }

    /// `1 / h'(p)`, with an infinite derivative contributing zero weight.
    fn inverse_slope(&self, p: f64) -> Result<f64> {
        let d = (self.h_prime)(p);
        if d == f64::INFINITY {
            Ok(0.0)
        } else if d.is_finite() && d > 0.0 {
            Ok(1.0 / d)
        } else {
            Err(Error::UndefinedDerivative { at: p })
        }
    }
}

/// A supported overlap measure.
#[derive(Clone)]
pub enum OverlapMeasure {
    HellingerSquared,
    Power { beta: f64 },
    FDivergence(FDivergence),
    Concave(ConcaveFamily),
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("beta = {beta} not in (0, 1)")))
    }
}

impl OverlapMeasure {
    pub fn power(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(OverlapMeasure::Power { beta })
    }

    /// Parses the names used on the command line:
    /// `hellinger`, `power:<β>`, `concave:root:<β>`, `concave:log1p`,
    /// `concave:exp:<c>`, `fdiv:<hellinger|tv|kl>:<d*>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?} in measure {spec:?}")))
        };
        let unknown = || Error::UnknownName { kind: "measure", name: spec.to_string() };
        match parts.as_slice() {
            ["hellinger"] => Ok(OverlapMeasure::HellingerSquared),
            ["power", b] => Self::power(num(b)?),
            ["concave", "root", b] => Ok(OverlapMeasure::Concave(ConcaveFamily::root(num(b)?)?)),
            ["concave", "log1p"] => Ok(OverlapMeasure::Concave(ConcaveFamily::log1p())),
            ["concave", "exp", c] => Ok(OverlapMeasure::Concave(ConcaveFamily::saturating(num(c)?)?)),
            ["fdiv", kind, d] => {
                let d = num(d)?;
                let f = match *kind {
                    "hellinger" => FDivergence::hellinger(d)?,
                    "tv" => FDivergence::total_variation(d)?,
                    "kl" => FDivergence::kl(d)?,
                    _ => return Err(unknown()),
                };
                Ok(OverlapMeasure::FDivergence(f))
            }
            _ => Err(unknown()),
        }
    }

    /// `G(p, q)`; `p` must be a full distribution, `q` any nonnegative vector.
    pub fn eval(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        self.check_target(p)?;
        Ok(self.overlap(p, q))
    }

    /// Whether the measure is known to be non-decreasing in every `q(x)`.
    pub fn is_coordinatewise_monotone(&self) -> bool {
        !matches!(self, OverlapMeasure::FDivergence(_))
    }
}

impl Overlap for OverlapMeasure {
    fn overlap(&self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            OverlapMeasure::HellingerSquared => p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum(),
            OverlapMeasure::Power { beta } => p
                .iter()
                .zip(q)
                .map(|(&a, &b)| if a == 0.0 || b == 0.0 { 0.0 } else { a.powf(1.0 - beta) * b.powf(*beta) })
                .sum(),
            OverlapMeasure::FDivergence(fd) => fd.d_star - fd.divergence(p, q),
            OverlapMeasure::Concave(c) => p
                .iter()
                .zip(q)
                // check_target guarantees the slope is usable.
                .map(|(&a, &b)| (c.h)(b) * c.inverse_slope(a).unwrap_or(f64::NAN))
                .sum(),
        }
    }

    fn check_target(&self, p: &[f64]) -> Result<()> {
        if let OverlapMeasure::Concave(c) = self {
            for &x in p {
                c.inverse_slope(x)?;
            }
        }
        Ok(())
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for OverlapMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverlapMeasure::HellingerSquared => f.write_str("hellinger"),
            OverlapMeasure::Power { beta } => write!(f, "power:{beta}"),
            OverlapMeasure::FDivergence(fd) => write!(f, "fdiv:{}:{}", fd.name, fd.d_star),
            OverlapMeasure::Concave(c) => write!(f, "concave:{}", c.name),
        }
    }
}

impl fmt::Debug for OverlapMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OverlapMeasure({self})")
    }
}

impl std::str::FromStr for OverlapMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// `G(p, q)` for dense vectors, checking measure parameters against `p`.
pub fn eval_overlap(measure: &OverlapMeasure, p: &[f64], q: &[f64]) -> Result<f64> {
    measure.eval(p, q)
}
