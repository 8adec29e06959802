//! The genuine q-Bernstein-Durrmeyer operator `U_{n,q}`: basis polynomials,
//! monomial images by three independent routes, the moment recurrence and
//! its cache, series application, the direct Jackson-integral definition,
//! and the Voronovskaja remainder objects.
//!
//! The default evaluation path is the recurrence, which stays in exact
//! polynomial arithmetic and keeps degrees capped at `min(m, n)`. The direct
//! basis expansion and the q-Stirling expansion are retained as independent
//! oracles; at `q > 1` the direct expansion cancels catastrophically in
//! floating point (q-binomials grow like `q^(k(n-k))`), so float-mode sums
//! there use compensated accumulation.

use std::sync::RwLock;

use crate::complex::{CompensatedCx, Cx};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::qcore::{
    self, jackson_integral, lq_coefficient_of, q_binomial, q_integer, q_integer_of,
    ComplexEval, QContext,
};
use crate::scalar::Scalar;
use crate::series::PowerSeries;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("operator requires n >= 1"));
    }
    Ok(())
}

/// `q^e` for a possibly negative exponent.
fn pow_i<S: Scalar>(q: &S, e: i64) -> S {
    if e >= 0 {
        q.powu(e as u32)
    } else {
        q.recip().powu((-e) as u32)
    }
}

/// q-Bernstein basis value `p_{n,k}(q; z) = [n k]_q z^k (1-z)_q^(n-k)`.
/// Defined for every `n >= 0`; `p_{0,0}` is the constant 1.
pub fn basis<S: Scalar>(n: usize, k: usize, ctx: &QContext<S>, z: &Cx<S>) -> Result<Cx<S>> {
    if k > n {
        return Err(Error::domain(format!(
            "basis requires 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let b = q_binomial(n, k as i64, ctx)?;
    let zk = z.powu(k as u32);
    let poch = qcore::q_pochhammer_one_minus(z, n - k, ctx);
    Ok((zk * poch).scale(&b))
}

/// `p_{n,k}(q; z)` expanded to dense coefficients.
pub fn basis_poly<S: Scalar>(n: usize, k: usize, ctx: &QContext<S>) -> Result<ComplexPoly<S>> {
    if k > n {
        return Err(Error::domain(format!(
            "basis_poly requires 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let b = q_binomial(n, k as i64, ctx)?;
    let mut p = ComplexPoly::monomial(k).scale(&b);
    let q = ctx.q();
    let mut qs = S::one();
    for _ in 0..(n - k) {
        let factor = ComplexPoly::from_real_coeffs(vec![S::one(), -qs.clone()]);
        p = p.mul(&factor);
        qs = qs * q.clone();
    }
    Ok(p)
}

/// Moment ratio `I_{k,m} = prod_{j=0}^{m-1} [k+j]_q / [n+j]_q`; equals 1 for
/// `m = 0` and for `k = n`.
pub fn moment_ratio<S: Scalar>(n: usize, k: usize, m: usize, ctx: &QContext<S>) -> Result<S> {
    check_n(n)?;
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "moment_ratio requires 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let q = ctx.q();
    let mut acc = S::one();
    for j in 0..m {
        acc = acc * q_integer_of(k + j, q) / q_integer_of(n + j, q);
    }
    Ok(acc)
}

/// Cache of the monomial images `U_{n,q}(e_m; z)` for one `(n, ctx)`, built
/// by the moment recurrence
/// `U(e_{m+1}) = q^m z(1-z)/[n+m]_q D_q U(e_m) + (q^m [n]_q z + [m]_q)/[n+m]_q U(e_m)`
/// starting from `U(e_0) = 1`. Rows are computed once and then immutable;
/// concurrent fills are idempotent.
pub struct MomentTable<S: Scalar> {
    n: usize,
    ctx: QContext<S>,
    rows: RwLock<Vec<ComplexPoly<S>>>,
}

impl<S: Scalar> MomentTable<S> {
    pub fn new(n: usize, ctx: QContext<S>) -> Result<Self> {
        check_n(n)?;
        Ok(MomentTable {
            n,
            ctx,
            rows: RwLock::new(vec![ComplexPoly::one()]),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &QContext<S> {
        &self.ctx
    }

    fn ensure(&self, m: usize) -> Result<()> {
        {
            let rows = self.rows.read().expect("moment cache lock");
            if rows.len() > m {
                return Ok(());
            }
        }
        let mut rows = self.rows.write().expect("moment cache lock");
        let q = self.ctx.q().clone();
        let n = self.n;
        while rows.len() <= m {
            let mi = rows.len() - 1; // recurrence index: builds row mi+1
            let u = rows[mi].clone();
            let nm = q_integer_of(n + mi, &q);
            let qm = q.powu(mi as u32);
            let t1 = u
                .q_derivative(&q)
                .mul_z_one_minus_z()
                .scale(&(qm.clone() / nm.clone()));
            let lin = ComplexPoly::from_real_coeffs(vec![
                q_integer_of(mi, &q) / nm.clone(),
                qm * q_integer_of(n, &q) / nm,
            ]);
            let mut next = t1.add(&u.mul(&lin));
            next.truncate_degree((mi + 1).min(n))?;
            rows.push(next);
        }
        Ok(())
    }

    /// The polynomial `U_{n,q}(e_m; z)`.
    pub fn row(&self, m: usize) -> Result<ComplexPoly<S>> {
        self.ensure(m)?;
        Ok(self.rows.read().expect("moment cache lock")[m].clone())
    }

    /// `U_{n,q}(f; z) = sum a_m U_{n,q}(e_m; z)` over the stored
    /// coefficients of `f`, by linearity.
    pub fn apply_series(&self, f: &PowerSeries<S>, z: &Cx<S>) -> Result<Cx<S>> {
        Ok(self.apply_series_with_uncertainty(f, z)?.0)
    }

    /// Series application together with the truncation uncertainty
    /// `sum_{m>N} |a_m| r^m` with `r = max(1, |z|)`, which dominates the
    /// dropped terms because `|U(e_m; z)| <= r^m` on `|z| <= r`, `r >= 1`.
    pub fn apply_series_with_uncertainty(
        &self,
        f: &PowerSeries<S>,
        z: &Cx<S>,
    ) -> Result<(Cx<S>, S)> {
        self.ensure(f.truncation())?;
        let rows = self.rows.read().expect("moment cache lock");
        let mut acc = CompensatedCx::new();
        for (m, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc.add(a.clone() * rows[m].eval(z));
        }
        let mut r = z.modulus();
        if r < S::one() {
            r = S::one();
        }
        let tail = f.tail_bound(f.truncation(), &r)?;
        Ok((acc.total(), tail))
    }
}

/// Build a moment table and fill rows `0..=m_max` by the recurrence.
pub fn u_monomial_recurrence<S: Scalar>(
    n: usize,
    m_max: usize,
    ctx: &QContext<S>,
) -> Result<MomentTable<S>> {
    let table = MomentTable::new(n, ctx.clone())?;
    table.ensure(m_max)?;
    Ok(table)
}

/// All basis polynomials `p_{n,0..n}` for one `(n, ctx)`, so callers that
/// need many monomial images expand each basis element once.
pub(crate) fn basis_polys<S: Scalar>(n: usize, ctx: &QContext<S>) -> Result<Vec<ComplexPoly<S>>> {
    (0..=n).map(|k| basis_poly(n, k, ctx)).collect()
}

/// Direct expansion of `U_{n,q}(e_m; z)`:
/// `z^n + sum_{k=1}^{n-1} p_{n,k}(q;z) I_{k,m}` for `m >= 1`, and the full
/// basis partition (which sums to 1) for `m = 0`. Independent of the
/// recurrence path; coefficient-wise equal to it in exact-rational mode.
pub fn u_monomial_direct<S: Scalar>(
    n: usize,
    m: usize,
    ctx: &QContext<S>,
) -> Result<ComplexPoly<S>> {
    check_n(n)?;
    let bases = basis_polys(n, ctx)?;
    u_monomial_direct_with_bases(n, m, ctx, &bases)
}

pub(crate) fn u_monomial_direct_with_bases<S: Scalar>(
    n: usize,
    m: usize,
    ctx: &QContext<S>,
    bases: &[ComplexPoly<S>],
) -> Result<ComplexPoly<S>> {
    let deg_cap = if m == 0 { 0 } else { m.min(n) };
    let mut acc: Vec<CompensatedCx<S>> = (0..=n).map(|_| CompensatedCx::new()).collect();
    let mut add_poly = |p: &ComplexPoly<S>| {
        for (j, c) in p.coeffs().iter().enumerate() {
            acc[j].add(c.clone());
        }
    };
    if m == 0 {
        for b in bases.iter() {
            add_poly(b);
        }
    } else {
        add_poly(&ComplexPoly::monomial(n));
        for k in 1..n {
            let w = moment_ratio(n, k, m, ctx)?;
            add_poly(&bases[k].scale(&w));
        }
    }
    let mut p = ComplexPoly::from_coeffs(acc.into_iter().map(|a| a.total()).collect());
    p.truncate_degree(deg_cap)?;
    Ok(p)
}

/// q-Bernstein monomial image
/// `B_{n,q}(e_s; z) = sum_{k=0}^n ([k]_q/[n]_q)^s p_{n,k}(q; z)` expanded to
/// coefficients; degree <= min(s, n) and `B(e_s; 1) = 1`.
pub fn bernstein_monomial<S: Scalar>(
    n: usize,
    s: usize,
    ctx: &QContext<S>,
) -> Result<ComplexPoly<S>> {
    check_n(n)?;
    let bases = basis_polys(n, ctx)?;
    bernstein_monomial_with_bases(n, s, ctx, &bases)
}

pub(crate) fn bernstein_monomial_with_bases<S: Scalar>(
    n: usize,
    s: usize,
    ctx: &QContext<S>,
    bases: &[ComplexPoly<S>],
) -> Result<ComplexPoly<S>> {
    let q = ctx.q();
    let nq = q_integer_of(n, q);
    let mut acc: Vec<CompensatedCx<S>> = (0..=n).map(|_| CompensatedCx::new()).collect();
    for k in 0..=n {
        let w = if s == 0 {
            S::one()
        } else if k == 0 {
            continue;
        } else {
            (q_integer_of(k, q) / nq.clone()).powu(s as u32)
        };
        let p = bases[k].scale(&w);
        for (j, c) in p.coeffs().iter().enumerate() {
            acc[j].add(c.clone());
        }
    }
    let mut p = ComplexPoly::from_coeffs(acc.into_iter().map(|a| a.total()).collect());
    p.truncate_degree(s.min(n))?;
    Ok(p)
}

/// Third route to `U_{n,q}(e_m; z)`: the q-Stirling expansion
/// `([n-1]_q!/[n+m-1]_q!) sum_{s=1}^m S_q(m,s) [n]_q^s B_{n,q}(e_s; z)`.
pub fn u_monomial_stirling<S: Scalar>(
    n: usize,
    m: usize,
    ctx: &QContext<S>,
) -> Result<ComplexPoly<S>> {
    let srow = qcore::stirling_row(m, ctx);
    u_monomial_stirling_with(n, m, ctx, &srow)
}

/// Stirling-route expansion with an explicit coefficient row, so tests can
/// inject a corrupted `S_q` table and watch exactly the Stirling-dependent
/// identities fail.
pub(crate) fn u_monomial_stirling_with<S: Scalar>(
    n: usize,
    m: usize,
    ctx: &QContext<S>,
    stirling: &[S],
) -> Result<ComplexPoly<S>> {
    check_n(n)?;
    if m == 0 {
        return Ok(ComplexPoly::one());
    }
    let bases = basis_polys(n, ctx)?;
    let berns = (0..=m)
        .map(|s| bernstein_monomial_with_bases(n, s, ctx, &bases))
        .collect::<Result<Vec<_>>>()?;
    u_monomial_stirling_from(n, m, ctx, stirling, &berns)
}

/// Stirling-route expansion from precomputed q-Bernstein monomial images
/// `bern[s] = B_{n,q}(e_s; z)`.
pub(crate) fn u_monomial_stirling_from<S: Scalar>(
    n: usize,
    m: usize,
    ctx: &QContext<S>,
    stirling: &[S],
    bern: &[ComplexPoly<S>],
) -> Result<ComplexPoly<S>> {
    check_n(n)?;
    if m == 0 {
        return Ok(ComplexPoly::one());
    }
    let nq = q_integer_of(n, ctx.q());
    let front = qcore::q_factorial(n - 1, ctx) / qcore::q_factorial(n + m - 1, ctx);
    let mut sum = ComplexPoly::zero();
    for s in 1..=m {
        let w = stirling[s].clone() * nq.powu(s as u32);
        sum = sum.add(&bern[s].scale(&w));
    }
    let mut p = sum.scale(&front);
    p.truncate_degree(m.min(n))?;
    Ok(p)
}

/// `U_{n,q}(f; ·)` prepared straight from its defining formula
/// (Definition 1): the endpoint values and the basis-weighted Jackson
/// q-integrals of `f`, which do not depend on `z`, computed once so the
/// operator can then be evaluated at many points.
pub struct DirectApplied<S: Scalar> {
    n: usize,
    ctx: QContext<S>,
    f0: Cx<S>,
    f1: Cx<S>,
    /// weighted integral for each k = 1..n-1
    weighted: Vec<Cx<S>>,
}

impl<S: Scalar> DirectApplied<S> {
    /// Covers `q > 1` (integrals in the parameter `1/q`, integrand
    /// arguments `q^(k-n) t` in `(0, 1]`) and `0 < q < 1`; at `q = 1` the
    /// closed-form moment path serves instead and this is a domain error.
    pub fn prepare(n: usize, ctx: &QContext<S>, f: &dyn ComplexEval<S>) -> Result<Self> {
        check_n(n)?;
        if ctx.is_q_one() {
            return Err(Error::domain(
                "u_apply_direct requires q != 1; the q = 1 branch is evaluated via \
                 closed-form moments (apply_series)",
            ));
        }
        let q = ctx.q().clone();
        let f0 = f.eval(&Cx::zero())?;
        let f1 = f.eval(&Cx::one())?;
        let mut weighted = Vec::with_capacity(n.saturating_sub(1));
        if q > S::one() {
            let p = q.recip();
            let pctx = ctx.reciprocal();
            let n1p = q_integer(n - 1, &pctx);
            for k in 1..n {
                let shift = pow_i(&q, k as i64 - n as i64); // q^(k-n) in (0,1]
                let integral = jackson_integral(
                    |t: &S| {
                        let inner =
                            basis(n - 2, k - 1, &pctx, &Cx::real(p.clone() * t.clone()))?;
                        let ft = f.eval(&Cx::real(shift.clone() * t.clone()))?;
                        Ok(inner * ft)
                    },
                    &p,
                    ctx,
                )?;
                let w = n1p.clone() * pow_i(&q, k as i64 - 1);
                weighted.push(integral.scale(&w));
            }
        } else {
            let n1q = q_integer(n - 1, ctx);
            for k in 1..n {
                let integral = jackson_integral(
                    |t: &S| {
                        let inner = basis(n - 2, k - 1, ctx, &Cx::real(q.clone() * t.clone()))?;
                        let ft = f.eval(&Cx::real(t.clone()))?;
                        Ok(inner * ft)
                    },
                    &q,
                    ctx,
                )?;
                let w = n1q.clone() * pow_i(&q, 1 - k as i64);
                weighted.push(integral.scale(&w));
            }
        }
        Ok(DirectApplied { n, ctx: ctx.clone(), f0, f1, weighted })
    }

    pub fn eval(&self, z: &Cx<S>) -> Result<Cx<S>> {
        let mut acc = CompensatedCx::new();
        acc.add(self.f0.clone() * basis(self.n, 0, &self.ctx, z)?);
        acc.add(self.f1.clone() * basis(self.n, self.n, &self.ctx, z)?);
        for (k, w) in self.weighted.iter().enumerate() {
            acc.add(basis(self.n, k + 1, &self.ctx, z)? * w.clone());
        }
        Ok(acc.total())
    }
}

/// Single-point form of Definition 1; see [`DirectApplied`]. For `n = 1`
/// the integral sum is empty and the result is the linear interpolant
/// `f(0)(1-z) + f(1)z`.
pub fn u_apply_direct<S: Scalar>(
    n: usize,
    ctx: &QContext<S>,
    f: &dyn ComplexEval<S>,
    z: &Cx<S>,
) -> Result<Cx<S>> {
    DirectApplied::prepare(n, ctx, f)?.eval(z)
}

/// `Theta_{n,m}(q;z) = U_{n,q}(e_m;z) - z^m - (c_m/[n+1]_q) z^(m-1)(1-z)`
/// with `c_m = q sum_{i<m} [i]_q + sum_{i<m} [i]_{1/q}`; the object whose
/// recurrence drives the Voronovskaja estimate. Zero for `m <= 2`.
pub fn theta<S: Scalar>(table: &MomentTable<S>, m: usize) -> Result<ComplexPoly<S>> {
    let u = table.row(m)?;
    if m == 0 {
        return Ok(u.sub(&ComplexPoly::one()));
    }
    let ctx = table.ctx();
    let cm = lq_coefficient_of(m, ctx.q());
    let scale = cm / q_integer(table.n() + 1, ctx);
    let correction = ComplexPoly::monomial(m - 1)
        .sub(&ComplexPoly::monomial(m))
        .scale(&scale);
    Ok(u.sub(&ComplexPoly::monomial(m)).sub(&correction))
}

/// Closed form of the remainder `R_{n,m}(q;z)` in the Theta recurrence
/// `Theta_{n,m} = q^(m-1) z(1-z)/[n+m-1]_q D_q(U(e_{m-1}) - z^(m-1))
///              + (q^(m-1)[n]_q z + [m-1]_q)/[n+m-1]_q Theta_{n,m-1} + R_{n,m}`:
///
/// `R_{n,m} = [m-1]_q/([n+m-1]_q [n+1]_q)
///            * [ c_{m-1} - (q[m-2]_q + q^(-1)[m-2]_{1/q} + c_{m-1}) z ]
///            * z^(m-2) (1-z)`,
///
/// zero for `m < 2` (and identically zero at `m = 2`, matching
/// `Theta_{n,1} = Theta_{n,2} = 0`).
pub fn remainder_rnm<S: Scalar>(n: usize, m: usize, ctx: &QContext<S>) -> Result<ComplexPoly<S>> {
    check_n(n)?;
    if m < 2 {
        return Ok(ComplexPoly::zero());
    }
    let q = ctx.q();
    let cm1 = lq_coefficient_of(m - 1, q);
    let front = q_integer(m - 1, ctx)
        / (q_integer(n + m - 1, ctx) * q_integer(n + 1, ctx));
    let slope = q.clone() * q_integer_of(m - 2, q)
        + q.recip() * q_integer_of(m - 2, &q.recip())
        + cm1.clone();
    let inner = ComplexPoly::from_real_coeffs(vec![cm1, -slope]);
    let shifted = inner.mul(&ComplexPoly::monomial(m - 2)); // * z^(m-2)
    let one_minus_z = ComplexPoly::from_real_coeffs(vec![S::one(), -S::one()]);
    Ok(shifted.mul(&one_minus_z).scale(&front))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::series::{builtin_series, BuiltinSeries};

    fn rctx(num: i64, den: i64) -> QContext<Rat> {
        QContext::new(Rat::from_ratio(num, den)).unwrap()
    }

    fn r(num: i64, den: i64) -> Rat {
        Rat::from_ratio(num, den)
    }

    #[test]
    fn basis_values() {
        let ctx = rctx(2, 1);
        // p_{2,1}(2; 1/2) = [2]_2 * 1/2 * (1 - 1/2) = 3/4
        let v = basis(2, 1, &ctx, &Cx::real(r(1, 2))).unwrap();
        assert_eq!(v.re, r(3, 4));
        // endpoints
        let v = basis(5, 5, &ctx, &Cx::one()).unwrap();
        assert_eq!(v, Cx::one());
        let v = basis(5, 0, &ctx, &Cx::zero()).unwrap();
        assert_eq!(v, Cx::one());
        assert!(basis(3, 4, &ctx, &Cx::zero()).is_err());
        // polynomial form agrees with the value form
        for k in 0..=4usize {
            let p = basis_poly(4, k, &ctx).unwrap();
            let z = Cx::new(r(1, 3), r(1, 5));
            assert_eq!(p.eval(&z), basis(4, k, &ctx, &z).unwrap());
        }
    }

    #[test]
    fn moment_ratio_values() {
        let ctx = rctx(2, 1);
        assert_eq!(moment_ratio(3, 1, 0, &ctx).unwrap(), r(1, 1));
        // [1][2]/[3][4] = 3/105 = 1/35
        assert_eq!(moment_ratio(3, 1, 2, &ctx).unwrap(), r(1, 35));
        let c1 = rctx(1, 1);
        assert_eq!(moment_ratio(5, 2, 1, &c1).unwrap(), r(2, 5));
        assert!(moment_ratio(3, 0, 1, &ctx).is_err());
    }

    #[test]
    fn closed_forms_for_small_m() {
        for ctx in [rctx(1, 2), rctx(1, 1), rctx(3, 2), rctx(2, 1)] {
            for n in 1..=6usize {
                let t = u_monomial_recurrence(n, 2, &ctx).unwrap();
                assert_eq!(t.row(0).unwrap(), ComplexPoly::one());
                assert_eq!(t.row(1).unwrap(), ComplexPoly::monomial(1));
                // U(e_2) = z^2 + (1+q) z(1-z)/[n+1]_q
                let c = (Rat::from_int(1) + ctx.q().clone())
                    / q_integer(n + 1, &ctx);
                let expect = ComplexPoly::monomial(2).add(
                    &ComplexPoly::monomial(1)
                        .sub(&ComplexPoly::monomial(2))
                        .scale(&c),
                );
                assert_eq!(t.row(2).unwrap(), expect, "q={} n={n}", ctx.q());
            }
        }
    }

    #[test]
    fn spec_anchor_row_n3_q2_m2() {
        // z^2 + z(1-z)/5 = z/5 + 4z^2/5
        let t = u_monomial_recurrence(3, 2, &rctx(2, 1)).unwrap();
        let row = t.row(2).unwrap();
        assert_eq!(row.coeff(0), Cx::zero());
        assert_eq!(row.coeff(1).re, r(1, 5));
        assert_eq!(row.coeff(2).re, r(4, 5));
    }

    #[test]
    fn degree_cap_at_n() {
        // n = 1: U(e_m) = z for all m >= 1 (linear interpolant)
        let t = u_monomial_recurrence(1, 6, &rctx(3, 2)).unwrap();
        for m in 1..=6 {
            assert_eq!(t.row(m).unwrap(), ComplexPoly::monomial(1), "m={m}");
        }
        // n = 2, m = 5: degree <= 2; direct route agrees
        let ctx = rctx(3, 2);
        let d = u_monomial_direct(2, 5, &ctx).unwrap();
        assert!(d.degree().unwrap() <= 2);
    }

    #[test]
    fn three_path_equality_spot() {
        for ctx in [rctx(1, 2), rctx(2, 3), rctx(1, 1), rctx(3, 2), rctx(2, 1)] {
            let n = 4;
            let t = u_monomial_recurrence(n, 5, &ctx).unwrap();
            for m in 0..=5usize {
                let rec = t.row(m).unwrap();
                let dir = u_monomial_direct(n, m, &ctx).unwrap();
                let sti = u_monomial_stirling(n, m, &ctx).unwrap();
                assert_eq!(rec, dir, "direct q={} m={m}", ctx.q());
                assert_eq!(rec, sti, "stirling q={} m={m}", ctx.q());
            }
        }
    }

    #[test]
    fn bernstein_monomial_shapes() {
        let ctx = rctx(3, 2);
        for n in 1..=6usize {
            assert_eq!(bernstein_monomial(n, 0, &ctx).unwrap(), ComplexPoly::one());
            assert_eq!(
                bernstein_monomial(n, 1, &ctx).unwrap(),
                ComplexPoly::monomial(1),
                "n={n}"
            );
            for s in 0..=5usize {
                let b = bernstein_monomial(n, s, &ctx).unwrap();
                assert_eq!(b.eval(&Cx::one()), Cx::one(), "B(e_s;1)=1, n={n} s={s}");
                if let Some(d) = b.degree() {
                    assert!(d <= s.min(n));
                }
            }
        }
    }

    #[test]
    fn apply_series_linear_reproduction_and_endpoints() {
        let ctx = rctx(3, 2);
        let lin = builtin_series(
            BuiltinSeries::Poly(vec![Cx::real(r(3, 1)), Cx::real(r(-2, 1))]),
            4,
        )
        .unwrap();
        let t = u_monomial_recurrence(5, 4, &ctx).unwrap();
        for z in [Cx::zero(), Cx::one(), Cx::new(r(2, 5), r(-1, 3))] {
            let u = t.apply_series(&lin, &z).unwrap();
            let f = lin.eval(&z).unwrap();
            assert_eq!(u, f);
        }
        // interpolation at 0 and 1 for a non-polynomial truncation
        let e = builtin_series::<Rat>(BuiltinSeries::Exp, 24).unwrap();
        let u0 = t.apply_series(&e, &Cx::zero()).unwrap();
        assert_eq!(u0, e.eval(&Cx::zero()).unwrap());
        let u1 = t.apply_series(&e, &Cx::one()).unwrap();
        assert_eq!(u1, e.eval(&Cx::one()).unwrap());
    }

    #[test]
    fn apply_series_e2_anchor() {
        // U(e_2; 1/2) at n=3, q=2 is 1/4 + (1/4)/5 = 3/10
        let ctx = rctx(2, 1);
        let t = u_monomial_recurrence(3, 2, &ctx).unwrap();
        let e2 = builtin_series::<Rat>(BuiltinSeries::Monomial(2), 4).unwrap();
        let v = t.apply_series(&e2, &Cx::real(r(1, 2))).unwrap();
        assert_eq!(v.re, r(3, 10));
    }

    #[test]
    fn direct_jackson_matches_series_exactly_enough() {
        // tight jackson tolerance so the rational-mode truncation error is
        // far below the comparison threshold
        let tol = r(1, 1_000_000_000_000_000_000);
        for (qn, qd) in [(3i64, 2i64), (2, 1), (1, 2)] {
            let ctx = QContext::new(r(qn, qd))
                .unwrap()
                .with_jackson_tol(tol.clone())
                .unwrap();
            let n = 4;
            let t = u_monomial_recurrence(n, 3, &ctx).unwrap();
            let e3 = builtin_series::<Rat>(BuiltinSeries::Monomial(3), 4).unwrap();
            for z in [Cx::real(r(1, 2)), Cx::new(r(-1, 3), r(1, 4))] {
                let direct = u_apply_direct(n, &ctx, &e3, &z).unwrap();
                let series = t.apply_series(&e3, &z).unwrap();
                let diff = (direct - series.clone()).modulus_sq();
                let gate = r(1, 1_000_000_000_000_000) // 1e-15
                    .powu(2)
                    * Rat::from_int(1).max(series.modulus_sq());
                assert!(diff <= gate, "q={qn}/{qd} z={z:?}");
            }
        }
    }

    #[test]
    fn direct_jackson_n1_is_linear_interpolant() {
        let ctx = rctx(2, 1);
        let e2 = builtin_series::<Rat>(BuiltinSeries::Monomial(2), 4).unwrap();
        let z = Cx::real(r(1, 3));
        let v = u_apply_direct(1, &ctx, &e2, &z).unwrap();
        // f(0)(1-z) + f(1)z = z
        assert_eq!(v, z);
        assert!(u_apply_direct(2, &rctx(1, 1), &e2, &z).is_err());
    }

    #[test]
    fn theta_small_m_vanishes() {
        for ctx in [rctx(3, 2), rctx(2, 1), rctx(1, 2)] {
            for n in 1..=5usize {
                let t = u_monomial_recurrence(n, 2, &ctx).unwrap();
                for m in 0..=2usize {
                    assert!(theta(&t, m).unwrap().is_zero(), "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn theta_recurrence_with_remainder() {
        // Theta_{n,m} = q^(m-1) z(1-z)/[n+m-1] D_q(U(e_{m-1}) - z^(m-1))
        //             + (q^(m-1)[n]z + [m-1])/[n+m-1] Theta_{n,m-1} + R_{n,m}
        for ctx in [rctx(3, 2), rctx(2, 1)] {
            let q = ctx.q().clone();
            for n in 1..=6usize {
                let t = u_monomial_recurrence(n, 6, &ctx).unwrap();
                for m in 2..=6usize {
                    let lhs = theta(&t, m).unwrap();
                    let nm = q_integer(n + m - 1, &ctx);
                    let qm = q.powu(m as u32 - 1);
                    let diff = t.row(m - 1).unwrap().sub(&ComplexPoly::monomial(m - 1));
                    let t1 = diff
                        .q_derivative(&q)
                        .mul_z_one_minus_z()
                        .scale(&(qm.clone() / nm.clone()));
                    let lin = ComplexPoly::from_real_coeffs(vec![
                        q_integer(m - 1, &ctx) / nm.clone(),
                        qm * q_integer(n, &ctx) / nm,
                    ]);
                    let t2 = theta(&t, m - 1).unwrap().mul(&lin);
                    let rhs = t1.add(&t2).add(&remainder_rnm(n, m, &ctx).unwrap());
                    assert_eq!(lhs, rhs, "q={} n={n} m={m}", ctx.q());
                }
            }
        }
    }

    #[test]
    fn idd1_recurrence() {
        // U(e_m) - z^m = q^(m-1) z(1-z)/[n+m-1] D_q U(e_{m-1})
        //   + (q^(m-1)[n]z + [m-1])/[n+m-1] (U(e_{m-1}) - z^(m-1))
        //   + [m-1]/[n+m-1] (1-z) z^(m-1)
        for ctx in [rctx(1, 2), rctx(3, 2), rctx(2, 1)] {
            let q = ctx.q().clone();
            for n in 1..=6usize {
                let t = u_monomial_recurrence(n, 6, &ctx).unwrap();
                for m in 2..=6usize {
                    let lhs = t.row(m).unwrap().sub(&ComplexPoly::monomial(m));
                    let nm = q_integer(n + m - 1, &ctx);
                    let qm = q.powu(m as u32 - 1);
                    let t1 = t
                        .row(m - 1)
                        .unwrap()
                        .q_derivative(&q)
                        .mul_z_one_minus_z()
                        .scale(&(qm.clone() / nm.clone()));
                    let lin = ComplexPoly::from_real_coeffs(vec![
                        q_integer(m - 1, &ctx) / nm.clone(),
                        qm * q_integer(n, &ctx) / nm.clone(),
                    ]);
                    let t2 = t
                        .row(m - 1)
                        .unwrap()
                        .sub(&ComplexPoly::monomial(m - 1))
                        .mul(&lin);
                    let t3 = ComplexPoly::monomial(m - 1)
                        .sub(&ComplexPoly::monomial(m))
                        .scale(&(q_integer(m - 1, &ctx) / nm));
                    let rhs = t1.add(&t2).add(&t3);
                    assert_eq!(lhs, rhs, "q={} n={n} m={m}", ctx.q());
                }
            }
        }
    }

    #[test]
    fn moment_bound_inq1_on_circle() {
        // |U(e_m; z)| <= r^m on |z| = r for r >= 1 (exact rational points)
        let ctx = rctx(2, 1);
        let t = u_monomial_recurrence(5, 8, &ctx).unwrap();
        for (rn, rd) in [(1i64, 1i64), (3, 2)] {
            let rr = r(rn, rd);
            for m in 0..=8usize {
                let row = t.row(m).unwrap();
                let cap = rr.powu(m as u32).powu(2);
                for j in 0..32usize {
                    let (c, s) = <Rat as Scalar>::circle_point(j, 32, &rr);
                    let z = Cx::new(c * rr.clone(), s * rr.clone());
                    assert!(
                        row.eval(&z).modulus_sq() <= cap,
                        "m={m} r={rn}/{rd} j={j}"
                    );
                }
            }
        }
    }
}
