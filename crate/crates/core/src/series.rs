//! Analytic test functions on disks as truncated power series with rigorous
//! coefficient tail bounds, circle sup-norms, and the convergence /
//! Voronovskaja bound constants.

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::qcore::{ComplexEval, QContext};
use crate::scalar::Scalar;

/// Default number of stored coefficients for builtin series.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Default number of circle samples for sup-norms.
pub const DEFAULT_SAMPLES: usize = 256;

/// Radius of convergence.
#[derive(Clone, Debug, PartialEq)]
pub enum Radius<S: Scalar> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Radius<S> {
    /// Is `r` strictly inside the radius?
    pub fn contains(&self, r: &S) -> bool {
        match self {
            Radius::Infinite => true,
            Radius::Finite(rr) => r < rr,
        }
    }
}

/// How the coefficient tail beyond the stored truncation decays.
#[derive(Clone, Debug, PartialEq)]
pub enum TailKind<S: Scalar> {
    /// `|a_j| <= 1/j!` (entire function of exponential type 1).
    EntireFactorial,
    /// `|a_j| <= pole^-(j+1)`; radius of convergence `pole`.
    Geometric { pole: S },
    /// The stored coefficients are the whole function.
    Polynomial,
}

/// A power series `f(z) = sum a_m z^m` with truncation, radius, and a
/// computable bound on the dropped tail.
#[derive(Clone, Debug)]
pub struct PowerSeries<S: Scalar> {
    coeffs: Vec<Cx<S>>,
    radius: Radius<S>,
    tail_kind: TailKind<S>,
    name: String,
}

/// Disk on which sup-norms are taken: radius `r >= 1` and the number of
/// equispaced circle samples (`>= 16`).
#[derive(Clone, Debug)]
pub struct DiskSpec<S: Scalar> {
    r: S,
    samples: usize,
}

impl<S: Scalar> DiskSpec<S> {
    pub fn new(r: S, samples: usize) -> Result<Self> {
        if r < S::one() {
            return Err(Error::domain("DiskSpec requires r >= 1"));
        }
        if samples < 16 {
            return Err(Error::domain("DiskSpec requires samples >= 16"));
        }
        Ok(DiskSpec { r, samples })
    }

    pub fn unit(samples: usize) -> Result<Self> {
        Self::new(S::one(), samples)
    }

    pub fn r(&self) -> &S {
        &self.r
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// The sample points, exactly on the circle `|z| = r`.
    pub fn circle_points(&self) -> Vec<Cx<S>> {
        (0..self.samples)
            .map(|j| {
                let (c, s) = S::circle_point(j, self.samples, &self.r);
                Cx::new(c * self.r.clone(), s * self.r.clone())
            })
            .collect()
    }
}

/// Builtin test-function catalog.
#[derive(Clone, Debug)]
pub enum BuiltinSeries<S: Scalar> {
    /// `exp(z)`, entire.
    Exp,
    /// `e_m(z) = z^m`.
    Monomial(usize),
    /// `1 / (a - z)` with `|a| > 1`; radius `|a|`.
    Geometric(S),
    /// An explicit polynomial.
    Poly(Vec<Cx<S>>),
}

/// Construct a builtin series with `truncation + 1` stored coefficients.
pub fn builtin_series<S: Scalar>(
    kind: BuiltinSeries<S>,
    truncation: usize,
) -> Result<PowerSeries<S>> {
    match kind {
        BuiltinSeries::Exp => {
            let mut coeffs = Vec::with_capacity(truncation + 1);
            let mut inv_fact = S::one();
            coeffs.push(Cx::one());
            for m in 1..=truncation {
                inv_fact = inv_fact / S::from_int(m as i64);
                coeffs.push(Cx::real(inv_fact.clone()));
            }
            Ok(PowerSeries {
                coeffs,
                radius: Radius::Infinite,
                tail_kind: TailKind::EntireFactorial,
                name: "exp".to_string(),
            })
        }
        BuiltinSeries::Monomial(m) => {
            let mut coeffs = vec![Cx::zero(); m + 1];
            coeffs[m] = Cx::one();
            Ok(PowerSeries {
                coeffs,
                radius: Radius::Infinite,
                tail_kind: TailKind::Polynomial,
                name: format!("monomial:{m}"),
            })
        }
        BuiltinSeries::Geometric(a) => {
            if a.abs() <= S::one() {
                return Err(Error::domain(
                    "geometric series requires |a| > 1 so that R = |a| > 1",
                ));
            }
            // 1/(a - z) = sum a^-(m+1) z^m
            let name = format!("geometric:{a}");
            let inv = a.recip();
            let mut coeffs = Vec::with_capacity(truncation + 1);
            let mut c = inv.clone();
            for _ in 0..=truncation {
                coeffs.push(Cx::real(c.clone()));
                c = c * inv.clone();
            }
            Ok(PowerSeries {
                coeffs,
                radius: Radius::Finite(a.abs()),
                tail_kind: TailKind::Geometric { pole: a.abs() },
                name,
            })
        }
        BuiltinSeries::Poly(coeffs) => {
            let trimmed: Vec<Cx<S>> = {
                let mut c = coeffs;
                while matches!(c.last(), Some(v) if v.is_zero()) {
                    c.pop();
                }
                c
            };
            Ok(PowerSeries {
                coeffs: trimmed,
                radius: Radius::Infinite,
                tail_kind: TailKind::Polynomial,
                name: "poly".to_string(),
            })
        }
    }
}

impl<S: Scalar> PowerSeries<S> {
    pub fn coeffs(&self) -> &[Cx<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Cx<S> {
        self.coeffs.get(m).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn radius(&self) -> &Radius<S> {
        &self.radius
    }

    pub fn tail_kind(&self) -> &TailKind<S> {
        &self.tail_kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when the function is exactly a polynomial of degree <= 1.
    pub fn is_linear(&self) -> bool {
        matches!(self.tail_kind, TailKind::Polynomial) && self.coeffs.len() <= 2
    }

    fn check_inside(&self, r: &S, what: &str) -> Result<()> {
        if !self.radius.contains(r) {
            return Err(Error::domain(format!(
                "{what} requires |z| < R (function `{}`)",
                self.name
            )));
        }
        Ok(())
    }

    /// Square-root-free interiority test: `|z|^2 < R^2`.
    fn check_z_inside(&self, z: &Cx<S>, what: &str) -> Result<()> {
        let inside = match &self.radius {
            Radius::Infinite => true,
            Radius::Finite(rr) => z.modulus_sq() < rr.clone() * rr.clone(),
        };
        if !inside {
            return Err(Error::domain(format!(
                "{what} requires |z| < R (function `{}`)",
                self.name
            )));
        }
        Ok(())
    }

    /// Upper bound on the modulus of coefficient `a_j` implied by the tail
    /// kind, for indices beyond the stored truncation.
    fn coeff_bound_beyond(&self, j: usize) -> S {
        match &self.tail_kind {
            TailKind::Polynomial => S::zero(),
            TailKind::EntireFactorial => {
                let mut f = S::one();
                for i in 1..=j {
                    f = f / S::from_int(i as i64);
                }
                f
            }
            TailKind::Geometric { pole } => pole.recip().powu(j as u32 + 1),
        }
    }

    /// Rigorous upper bound on `sum_{j>m} |a_j| r^j` for `r` inside the
    /// radius. Entire-factorial tails use the ratio test with an explicit
    /// geometric remainder; geometric tails use the closed geometric sum.
    pub fn tail_bound(&self, m: usize, r: &S) -> Result<S> {
        match &self.tail_kind {
            TailKind::Polynomial => Ok(S::zero()),
            TailKind::EntireFactorial => {
                // terms t_j = r^j / j!; ratio t_{j+1}/t_j = r/(j+1)
                let mut j = m + 1;
                let mut term = r.powu(j as u32);
                for i in 1..=j {
                    term = term / S::from_int(i as i64);
                }
                let half = S::from_ratio(1, 2);
                let mut sum = S::zero();
                loop {
                    let ratio = r.clone() / S::from_int(j as i64 + 1);
                    if ratio <= half {
                        // geometric remainder: term * ratio-sum
                        let tail = term.clone() / (S::one() - ratio);
                        return Ok(sum + tail);
                    }
                    sum = sum + term.clone();
                    term = term * r.clone() / S::from_int(j as i64 + 1);
                    j += 1;
                }
            }
            TailKind::Geometric { pole } => {
                self.check_inside(r, "tail_bound")?;
                // sum_{j>m} pole^-(j+1) r^j = (r/pole)^(m+1) / (pole - r)
                let ratio = r.clone() / pole.clone();
                Ok(ratio.powu(m as u32 + 1) / (pole.clone() - r.clone()))
            }
        }
    }

    /// Evaluate by Horner at `|z| < R`.
    pub fn eval(&self, z: &Cx<S>) -> Result<Cx<S>> {
        self.check_z_inside(z, "eval")?;
        let mut acc = Cx::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        Ok(acc)
    }

    /// Evaluate together with the absolute truncation uncertainty
    /// `tail_bound(N, |z|)`.
    pub fn eval_with_uncertainty(&self, z: &Cx<S>) -> Result<(Cx<S>, S)> {
        let v = self.eval(z)?;
        let u = self.tail_bound(self.truncation(), &z.modulus())?;
        Ok((v, u))
    }

    /// `f''(z) = sum m(m-1) a_m z^(m-2)`, truncated like `eval`.
    pub fn second_derivative_eval(&self, z: &Cx<S>) -> Result<Cx<S>> {
        self.check_z_inside(z, "second_derivative_eval")?;
        let mut acc = Cx::zero();
        for (m, c) in self.coeffs.iter().enumerate().skip(2).rev() {
            let w = S::from_int((m * (m - 1)) as i64);
            acc = acc * z.clone() + c.scale(&w);
        }
        Ok(acc)
    }
}

impl<S: Scalar> ComplexEval<S> for PowerSeries<S> {
    fn eval(&self, z: &Cx<S>) -> Result<Cx<S>> {
        PowerSeries::eval(self, z)
    }

    fn derivative_at_zero(&self) -> Result<Cx<S>> {
        Ok(self.coeff(1))
    }
}

/// Sup of `|g(z)|` over equispaced samples of the circle `|z| = r`.
///
/// For analytic `g` the maximum-modulus principle makes circle samples
/// sufficient; the sampled value is a lower bound of the true sup and is
/// nondecreasing when the sample count doubles (the grids nest).
pub fn sup_norm_on_circle<S, G>(g: G, disk: &DiskSpec<S>) -> Result<S>
where
    S: Scalar,
    G: Fn(&Cx<S>) -> Result<Cx<S>>,
{
    let mut best_sq = S::zero();
    for z in disk.circle_points() {
        let v = g(&z)?;
        let m = v.modulus_sq();
        if m > best_sq {
            best_sq = m;
        }
    }
    Ok(best_sq.sqrt())
}

/// Weight profiles for the theorem tail sums.
enum Weight {
    /// `m (m-1)`, first-order bound.
    Convergence,
    /// `(m-1)^2 (m-2)^2`, Voronovskaja bound.
    Voronovskaja,
}

impl Weight {
    fn apply<S: Scalar>(&self, m: usize) -> S {
        match self {
            Weight::Convergence => S::from_int((m * (m - 1)) as i64),
            Weight::Voronovskaja => {
                S::from_int(((m - 1) * (m - 1) * (m - 2) * (m - 2)) as i64)
            }
        }
    }

    /// Upper bound for `w(j+1)/w(j)`, decreasing in `j`.
    fn ratio_bound<S: Scalar>(&self, j: usize) -> S {
        match self {
            Weight::Convergence => {
                S::from_int(j as i64 + 1) / S::from_int(j as i64 - 1)
            }
            Weight::Voronovskaja => {
                let r = S::from_int(j as i64) / S::from_int(j as i64 - 2);
                r.clone() * r
            }
        }
    }
}

/// `sum_{m >= start} |a_m| w(m) x^(m-2)` with a rigorous majorant for the
/// tail beyond the stored coefficients (ratio test with explicit remainder).
fn weighted_sum<S: Scalar>(
    f: &PowerSeries<S>,
    start: usize,
    x: &S,
    weight: Weight,
) -> Result<S> {
    let mut sum = S::zero();
    let n = f.truncation();
    for m in start..=n {
        let am = f.coeff(m).modulus();
        if am.is_zero() {
            continue;
        }
        let w: S = weight.apply(m);
        sum = sum + am * w * x.powu(m as u32 - 2);
    }
    if matches!(f.tail_kind(), TailKind::Polynomial) {
        return Ok(sum);
    }
    // Tail from j = max(n+1, start): terms |a_j| w(j) x^(j-2), closed by the
    // ratio test once t_{j+1}/t_j <= ratio_bound(j) * (coeff ratio) * x
    // drops below a cap strictly less than 1.
    let coeff_step = |j: usize| -> S {
        match f.tail_kind() {
            TailKind::EntireFactorial => S::from_int(j as i64 + 1).recip(),
            TailKind::Geometric { pole } => pole.recip(),
            TailKind::Polynomial => S::zero(),
        }
    };
    let cap = match f.tail_kind() {
        // the geometric coefficient ratio never fades, so the cap must sit
        // strictly between x/pole and 1 for the remainder to close
        TailKind::Geometric { pole } => {
            let base = x.clone() / pole.clone();
            if base >= S::one() {
                return Err(Error::domain(
                    "weighted tail requires x < R (theorem hypothesis violated)",
                ));
            }
            (S::one() + base) / S::from_int(2)
        }
        _ => S::from_ratio(1, 2),
    };
    let mut j = (n + 1).max(start);
    for _ in 0..100_000 {
        let term = f.coeff_bound_beyond(j) * weight.apply::<S>(j) * x.powu(j as u32 - 2);
        if j >= 3 {
            let ratio = weight.ratio_bound::<S>(j) * coeff_step(j) * x.clone();
            if ratio <= cap {
                return Ok(sum + term / (S::one() - ratio));
            }
        }
        sum = sum + term;
        j += 1;
    }
    Err(Error::convergence("weighted tail did not close within 100000 terms"))
}

/// Tail majorant `sum_{m>=start} |a_m| m(m-1) x^(m-2)` restricted to the
/// coefficients beyond the stored truncation; used for the `L_q` series
/// remainder via `c_m <= m(m-1) q^(m-1)`.
pub(crate) fn weighted_convergence_tail<S: Scalar>(
    f: &PowerSeries<S>,
    start: usize,
    x: &S,
) -> Result<S> {
    weighted_sum(f, start, x, Weight::Convergence)
}

/// Theorem 1 constant: `r(1+r)/[n+1]_q * sum_{m>=2} |a_m| m(m-1) (qr)^(m-2)`,
/// a proven upper bound for the sup error of the operator on `|z| <= r`.
/// Requires `q r < R`.
pub fn theorem1_bound<S: Scalar>(
    f: &PowerSeries<S>,
    ctx: &QContext<S>,
    n: usize,
    disk: &DiskSpec<S>,
) -> Result<S> {
    let r = disk.r();
    let x = ctx.q().clone() * r.clone();
    if !f.radius().contains(&x) {
        return Err(Error::domain(
            "theorem1_bound requires q*r < R (Theorem 1 hypothesis)",
        ));
    }
    let s = weighted_sum(f, 2, &x, Weight::Convergence)?;
    let front = r.clone() * (S::one() + r.clone())
        / crate::qcore::q_integer(n + 1, ctx);
    Ok(front * s)
}

/// Theorem 2 constant:
/// `4 r^2 (1+r)^2 / [n+1]_q^2 * sum_{m>=3} |a_m| (m-1)^2 (m-2)^2 (q^2 r)^(m-2)`.
/// Requires `q^2 r < R`.
pub fn theorem2_bound<S: Scalar>(
    f: &PowerSeries<S>,
    ctx: &QContext<S>,
    n: usize,
    disk: &DiskSpec<S>,
) -> Result<S> {
    let r = disk.r();
    let q = ctx.q();
    let x = q.clone() * q.clone() * r.clone();
    if !f.radius().contains(&x) {
        return Err(Error::domain(
            "theorem2_bound requires q^2*r < R (Theorem 2 hypothesis)",
        ));
    }
    let s = weighted_sum(f, 3, &x, Weight::Voronovskaja)?;
    let qn = crate::qcore::q_integer(n + 1, ctx);
    let one_plus_r = S::one() + r.clone();
    let front = S::from_int(4) * r.clone() * r.clone() * one_plus_r.clone() * one_plus_r
        / (qn.clone() * qn);
    Ok(front * s)
}
