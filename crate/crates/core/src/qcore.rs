//! q-arithmetic primitives: q-integers, q-factorials, q-binomials, the
//! shifted product `(1-z)_q^n`, the q-derivative, the Jackson q-integral on
//! `[0,1]`, the q-Beta function, and q-Stirling numbers.
//!
//! All operations are pure and deterministic given `(inputs, ctx)` and are
//! safe to call concurrently with a shared [`QContext`].

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Scalar};

/// Shared evaluation context: the deformation parameter `q > 0`, the numeric
/// mode, and the truncation tolerances for infinite sums.
#[derive(Clone, Debug)]
pub struct QContext<S: Scalar> {
    q: S,
    mode: NumericMode,
    jackson_tol: S,
    series_tol: S,
    jackson_max_terms: usize,
}

impl<S: Scalar> QContext<S> {
    /// Create a context with default tolerances (`1e-12`) and a Jackson
    /// term cap of `10^6`. Requires `q > 0`.
    pub fn new(q: S) -> Result<Self> {
        if q <= S::zero() {
            return Err(Error::domain("QContext requires q > 0"));
        }
        let mode = q.mode();
        if let NumericMode::Float { precision_bits } = mode {
            if precision_bits < crate::scalar::MIN_FLOAT_BITS {
                return Err(Error::domain("float precision must be >= 53 bits"));
            }
        }
        Ok(QContext {
            q,
            mode,
            jackson_tol: S::from_ratio(1, 1_000_000_000_000),
            series_tol: S::from_ratio(1, 1_000_000_000_000),
            jackson_max_terms: 1_000_000,
        })
    }

    /// Replace the Jackson-integral relative tail tolerance; must be in (0,1).
    pub fn with_jackson_tol(mut self, tol: S) -> Result<Self> {
        if tol <= S::zero() || tol >= S::one() {
            return Err(Error::domain("jackson_tol must lie in (0, 1)"));
        }
        self.jackson_tol = tol;
        Ok(self)
    }

    /// Replace the series truncation tolerance; must be in (0,1).
    pub fn with_series_tol(mut self, tol: S) -> Result<Self> {
        if tol <= S::zero() || tol >= S::one() {
            return Err(Error::domain("series_tol must lie in (0, 1)"));
        }
        self.series_tol = tol;
        Ok(self)
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn jackson_tol(&self) -> &S {
        &self.jackson_tol
    }

    pub fn series_tol(&self) -> &S {
        &self.series_tol
    }

    pub fn jackson_max_terms(&self) -> usize {
        self.jackson_max_terms
    }

    pub fn is_q_one(&self) -> bool {
        self.q == S::one()
    }

    /// The context with `q` replaced by `1/q`, tolerances kept.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.clone();
        c.q = self.q.recip();
        c
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`, with `[0]_q = 0`.
pub fn q_integer<S: Scalar>(n: usize, ctx: &QContext<S>) -> S {
    q_integer_of(n, ctx.q())
}

pub(crate) fn q_integer_of<S: Scalar>(n: usize, q: &S) -> S {
    let mut acc = S::zero();
    let mut pw = S::one();
    for _ in 0..n {
        acc = acc + pw.clone();
        pw = pw * q.clone();
    }
    acc
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial<S: Scalar>(n: usize, ctx: &QContext<S>) -> S {
    let q = ctx.q();
    let mut acc = S::one();
    let mut qint = S::zero();
    let mut pw = S::one();
    for _ in 1..=n {
        qint = qint + pw.clone();
        pw = pw * q.clone();
        acc = acc * qint.clone();
    }
    acc
}

/// Gaussian binomial `[n k]_q`, computed by the q-Pascal recurrence
/// `[n k] = [n-1 k-1] + q^k [n-1 k]`, valid for every `q > 0` including 1.
///
/// The factorial-ratio form `[n]!/([k]![n-k]!)` is kept as a test oracle.
pub fn q_binomial<S: Scalar>(n: usize, k: i64, ctx: &QContext<S>) -> Result<S> {
    if k < 0 || k as usize > n {
        return Err(Error::domain(format!(
            "q_binomial requires 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let k = k as usize;
    let q = ctx.q();
    // row[j] = [row_index choose j]_q
    let mut row = vec![S::one()];
    for _ in 1..=n {
        let prev = row;
        let mut next = Vec::with_capacity(prev.len() + 1);
        next.push(S::one());
        let mut qpw = q.clone();
        for j in 1..prev.len() {
            next.push(prev[j - 1].clone() + qpw.clone() * prev[j].clone());
            qpw = qpw * q.clone();
        }
        next.push(S::one());
        row = next;
    }
    Ok(row[k].clone())
}

/// `(1-z)_q^n = prod_{s=0}^{n-1} (1 - q^s z)`; the empty product is 1.
pub fn q_pochhammer_one_minus<S: Scalar>(z: &Cx<S>, n: usize, ctx: &QContext<S>) -> Cx<S> {
    let q = ctx.q();
    let mut acc = Cx::one();
    let mut qs = S::one();
    for _ in 0..n {
        let factor = Cx::one() - z.scale(&qs);
        acc = acc * factor;
        qs = qs.clone() * q.clone();
    }
    acc
}

/// A function of one complex variable that additionally exposes its
/// derivative at the origin, as the q-derivative definition requires there.
pub trait ComplexEval<S: Scalar> {
    fn eval(&self, z: &Cx<S>) -> Result<Cx<S>>;
    fn derivative_at_zero(&self) -> Result<Cx<S>>;
}

/// `D_q f(z) = (f(qz) - f(z)) / ((q-1) z)` for `z != 0`, and `f'(0)` at the
/// origin. Rejects `q = 1`; classical-derivative callers use their own path.
pub fn q_derivative<S: Scalar>(
    f: &dyn ComplexEval<S>,
    z: &Cx<S>,
    ctx: &QContext<S>,
) -> Result<Cx<S>> {
    if ctx.is_q_one() {
        return Err(Error::domain(
            "q_derivative requires q != 1 (use the classical derivative at q = 1)",
        ));
    }
    if z.is_zero() {
        return f.derivative_at_zero();
    }
    let q = ctx.q();
    let fqz = f.eval(&z.scale(q))?;
    let fz = f.eval(z)?;
    let denom = z.scale(&(q.clone() - S::one()));
    Ok((fqz - fz) / denom)
}

/// Jackson q-integral on `[0,1]`: `(1-p) * sum_{j>=0} f(p^j) p^j` for
/// `0 < p < 1`, truncated once the geometric tail bound drops below
/// `jackson_tol` relative to the partial sum.
pub fn jackson_integral<S, F>(f: F, p: &S, ctx: &QContext<S>) -> Result<Cx<S>>
where
    S: Scalar,
    F: Fn(&S) -> Result<Cx<S>>,
{
    if *p <= S::zero() || *p >= S::one() {
        return Err(Error::domain("jackson_integral requires 0 < p < 1"));
    }
    let tol = ctx.jackson_tol();
    let mut sum = Cx::<S>::zero();
    let mut grid_bound = S::zero(); // running sup of |re|+|im| on the grid
    let mut pj = S::one();
    for _ in 0..ctx.jackson_max_terms() {
        let v = f(&pj)?;
        let mag = v.modulus_upper();
        if mag > grid_bound {
            grid_bound = mag;
        }
        sum = sum + v.scale(&pj);
        pj = pj.clone() * p.clone();
        // The result-scale remaining tail is at most grid_bound * p^(j+1);
        // compare against the scaled partial sum through a lower bound of
        // its modulus, so the test is sound without square roots.
        let sum_floor = if sum.re.abs() > sum.im.abs() { sum.re.abs() } else { sum.im.abs() };
        let scale = S::one() - p.clone();
        if grid_bound.clone() * pj.clone() <= tol.clone() * scale.clone() * sum_floor {
            return Ok(sum.scale(&scale));
        }
    }
    Err(Error::convergence(format!(
        "jackson_integral: tolerance {} not reached within {} terms",
        tol,
        ctx.jackson_max_terms()
    )))
}

/// q-Beta function in closed form:
/// `B_p(m, n) = [m-1]_p! [n-1]_p! / [m+n-1]_p!` for `0 < p < 1`.
///
/// Equals the Jackson integral of `t^(m-1) (1-pt)_p^(n-1)` within
/// `jackson_tol`; that equality is checked by the identity suite.
pub fn q_beta<S: Scalar>(m: usize, n: usize, p: &S) -> Result<S> {
    if m < 1 || n < 1 {
        return Err(Error::domain("q_beta requires m, n >= 1"));
    }
    if *p <= S::zero() || *p >= S::one() {
        return Err(Error::domain("q_beta requires 0 < p < 1"));
    }
    let pctx = QContext::new(p.clone())?;
    let num = q_factorial(m - 1, &pctx) * q_factorial(n - 1, &pctx);
    let den = q_factorial(m + n - 1, &pctx);
    Ok(num / den)
}

/// q-Stirling numbers `S_q(m, s)` defined by
/// `prod_{s=0}^{m-1} (q^s [k]_q + [s]_q) = sum_{s=1}^m S_q(m,s) [k]_q^s`,
/// computed by the recurrence
/// `S_q(m+1, s) = [m]_q S_q(m, s) + q^m S_q(m, s-1)` with `S_q(0,0) = 1`.
///
/// Returns 0 for `s > m` and for `s = 0, m >= 1`; positive for `1 <= s <= m`.
pub fn q_stirling<S: Scalar>(m: usize, s: usize, ctx: &QContext<S>) -> S {
    if s > m {
        return S::zero();
    }
    if m == 0 {
        return S::one(); // s == 0 here
    }
    if s == 0 {
        return S::zero();
    }
    stirling_row(m, ctx)[s].clone()
}

/// The asymptotic series coefficient
/// `c_m = q * sum_{i=1}^{m-1} [i]_q + sum_{i=1}^{m-1} [i]_{1/q}`.
///
/// Defined by the same expression for every `q > 0`; at `q = 1` it equals
/// `m (m-1)` exactly with no division by `q - 1` anywhere.
pub(crate) fn lq_coefficient_of<S: Scalar>(m: usize, q: &S) -> S {
    if m < 2 {
        return S::zero();
    }
    let qr = q.recip();
    let mut sum_q = S::zero();
    let mut sum_qr = S::zero();
    let mut int_q = S::zero();
    let mut int_qr = S::zero();
    let mut pow_q = S::one();
    let mut pow_qr = S::one();
    for _ in 1..m {
        int_q = int_q + pow_q.clone();
        int_qr = int_qr + pow_qr.clone();
        pow_q = pow_q * q.clone();
        pow_qr = pow_qr * qr.clone();
        sum_q = sum_q + int_q.clone();
        sum_qr = sum_qr + int_qr.clone();
    }
    q.clone() * sum_q + sum_qr
}

/// Row `m` of the q-Stirling table: entries `S_q(m, 0..=m)`.
pub(crate) fn stirling_row<S: Scalar>(m: usize, ctx: &QContext<S>) -> Vec<S> {
    let q = ctx.q();
    let mut row = vec![S::one()]; // m = 0
    let mut qint = S::zero(); // [j]_q
    let mut qpow = S::one(); // q^j
    for _ in 0..m {
        let mut next = vec![S::zero(); row.len() + 1];
        for (s, val) in row.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            next[s] = next[s].clone() + qint.clone() * val.clone();
            next[s + 1] = next[s + 1].clone() + qpow.clone() * val.clone();
        }
        qint = qint + qpow.clone();
        qpow = qpow * q.clone();
        row = next;
    }
    row
}
