//! Real scalar abstraction: exact rational arithmetic or binary floating
//! point with configurable precision.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Three
//! implementations are provided:
//!
//! * [`Rat`] (`num_rational::BigRational`) — exact arithmetic, used to verify
//!   polynomial identities without any rounding,
//! * `f64` — the 53-bit mantissa hardware float,
//! * [`Mpf`] — an `astro-float` big float carrying its mantissa precision
//!   per value; binary operations round to the larger operand precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// How numbers are represented in a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    /// Arbitrary-precision rationals; every operation is exact.
    ExactRational,
    /// Binary floating point with the given mantissa precision in bits.
    Float { precision_bits: u32 },
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::ExactRational => write!(f, "rational"),
            NumericMode::Float { precision_bits } => write!(f, "float:{precision_bits}"),
        }
    }
}

/// Minimum admissible float precision (the f64 mantissa width).
pub const MIN_FLOAT_BITS: u32 = 53;

/// Real scalar the whole crate is generic over.
///
/// `sqrt` semantics differ by implementation and are documented there; all
/// other operations are the usual field operations, exact for [`Rat`] and
/// correctly rounded for the float types.
pub trait Scalar:
    Sized
    + Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;

    /// Integer embedding. For [`Mpf`] the result is exact (64-bit mantissa);
    /// precision widens on contact with higher-precision operands.
    fn from_int(v: i64) -> Self;

    /// `num/den`. Exact for [`Rat`]; rounded at the implementation's
    /// default precision otherwise. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact dyadic conversion of a finite `f64`.
    fn from_f64(v: f64) -> Self;

    /// Nearest `f64`, for reporting.
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool;

    fn abs(&self) -> Self;

    /// Nonnegative square root; `self` must be >= 0.
    ///
    /// * [`Rat`]: exact when numerator and denominator are perfect squares,
    ///   otherwise the smallest dyadic upper bound with 128 fractional bits.
    ///   Rounding up keeps derived error bounds valid.
    /// * floats: correctly rounded at the value's precision.
    fn sqrt(&self) -> Self;

    /// `self^e` by repeated squaring.
    fn powu(&self, e: u32) -> Self;

    fn recip(&self) -> Self;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// The numeric mode this value computes in.
    fn mode(&self) -> NumericMode;

    /// `(cos, sin)` of the angle `2*pi*j/samples`, reduced before use so
    /// that sample grids nest when `samples` doubles.
    ///
    /// For [`Rat`] the point is an exact rational point *on* the unit
    /// circle: the four cardinal angles are exact, every other angle uses
    /// the tangent-half-angle parametrization with a dyadic rational `t`,
    /// which keeps `cos^2 + sin^2 = 1` exactly while placing the point
    /// within ~1e-16 of the requested angle.
    ///
    /// `proto` supplies the working precision for [`Mpf`].
    fn circle_point(j: usize, samples: usize, proto: &Self) -> (Self, Self);

    /// Parse a decimal literal (`1.5`, `2e-3`) or a fraction (`3/2`).
    fn parse(s: &str) -> Result<Self>;

    /// Canonical report string: exact fraction for [`Rat`], 17 significant
    /// digits otherwise.
    fn report_str(&self) -> String;
}

fn reduce_angle(j: usize, samples: usize) -> (u64, u64) {
    let g = (j as u64).gcd(&(samples as u64));
    if g == 0 {
        return (0, samples.max(1) as u64);
    }
    (j as u64 / g, samples as u64 / g)
}

// ---------------------------------------------------------------------------
// Rat
// ---------------------------------------------------------------------------

impl Scalar for Rat {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio: zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("from_f64: non-finite input")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative rational");
        if Zero::is_zero(self) {
            return <BigRational as Zero>::zero();
        }
        let p = self.numer();
        let q = self.denom();
        let sp = p.sqrt();
        let sq = q.sqrt();
        if &(&sp * &sp) == p && &(&sq * &sq) == q {
            return BigRational::new(sp, sq);
        }
        // Dyadic upper bound: sqrt(p/q) = sqrt(p*q)/q <= (isqrt(p*q*4^k)+1)/(q*2^k).
        const K: u32 = 128;
        let n = p * q << (2 * K as usize);
        let t = n.sqrt() + BigInt::one();
        BigRational::new(t, q << (K as usize))
    }

    fn powu(&self, e: u32) -> Self {
        num_traits::Pow::pow(self, e as usize)
    }

    fn recip(&self) -> Self {
        assert!(!Zero::is_zero(self), "recip of zero");
        BigRational::new(self.denom().clone(), self.numer().clone())
    }

    fn is_exact() -> bool {
        true
    }

    fn mode(&self) -> NumericMode {
        NumericMode::ExactRational
    }

    fn circle_point(j: usize, samples: usize, _proto: &Self) -> (Self, Self) {
        let (a, b) = reduce_angle(j, samples);
        let one = <Rat as Scalar>::one();
        let zero = <Rat as Scalar>::zero();
        match (a, b) {
            (0, _) => return (one, zero),
            (1, 4) => return (zero, one),
            (1, 2) => return (-one, zero),
            (3, 4) => return (zero, -one),
            _ => {}
        }
        // Tangent half-angle: theta = 2*pi*a/b, t = tan(pi*a/b) as an exact
        // dyadic rational; (cos, sin) = ((1-t^2)/(1+t^2), 2t/(1+t^2)).
        // t is quantized to f32 (24-bit mantissa): the point stays exactly
        // on the unit circle, the angle moves by < 1e-6, and downstream
        // exact arithmetic works with 4x smaller integers.
        let t_f = (std::f64::consts::PI * a as f64 / b as f64).tan() as f32;
        let t = <Rat as Scalar>::from_f64(t_f as f64);
        let t2 = &t * &t;
        let denom = &t2 + <Rat as One>::one();
        let cos = (<Rat as One>::one() - &t2) / &denom;
        let sin = (BigRational::from_integer(BigInt::from(2)) * t) / denom;
        (cos, sin)
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn report_str(&self) -> String {
        if self.denom().is_one() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Parse `P/Q`, an integer, or a decimal literal into an exact rational.
fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("invalid fraction numerator: {num:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("invalid fraction denominator: {den:?}")))?;
        if Zero::is_zero(&d) {
            return Err(Error::domain("fraction denominator is zero"));
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal literal, optionally with exponent: [-]ddd[.ddd][e[+-]dd]
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let e: i32 = e
                .parse()
                .map_err(|_| Error::domain(format!("invalid exponent in {s:?}")))?;
            (m, e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(Error::domain(format!("invalid number: {s:?}")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::domain(format!("invalid number: {s:?}")))?;
    let shift = frac_part.len() as i32 - exp10;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::new(n, num_traits::Pow::pow(&ten, shift as usize))
    } else {
        BigRational::from_integer(n * num_traits::Pow::pow(&ten, (-shift) as usize))
    })
}

// ---------------------------------------------------------------------------
// f64
// ---------------------------------------------------------------------------

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio: zero denominator");
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn powu(&self, e: u32) -> Self {
        f64::powi(*self, e as i32)
    }

    fn recip(&self) -> Self {
        1.0 / *self
    }

    fn is_exact() -> bool {
        false
    }

    fn mode(&self) -> NumericMode {
        NumericMode::Float { precision_bits: MIN_FLOAT_BITS }
    }

    fn circle_point(j: usize, samples: usize, _proto: &Self) -> (Self, Self) {
        let (a, b) = reduce_angle(j, samples);
        let theta = 2.0 * std::f64::consts::PI * (a as f64 / b as f64);
        (theta.cos(), theta.sin())
    }

    fn parse(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        Ok(Scalar::to_f64(&r))
    }

    fn report_str(&self) -> String {
        format!("{:.16e}", self)
    }
}

// ---------------------------------------------------------------------------
// Mpf
// ---------------------------------------------------------------------------

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Arbitrary-precision binary float. Values carry their own mantissa
/// precision; binary operations use the larger of the two.
#[derive(Clone, Debug)]
pub struct Mpf {
    value: BigFloat,
    prec: usize,
}

impl Mpf {
    /// A value from an `i64`, exact, at precision `prec` bits.
    pub fn int_with_prec(v: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_FLOAT_BITS) as usize;
        Mpf { value: BigFloat::from_i64(v, prec), prec }
    }

    /// `num/den` rounded to `prec` bits.
    pub fn ratio_with_prec(num: i64, den: i64, prec: u32) -> Self {
        assert!(den != 0, "ratio_with_prec: zero denominator");
        let prec = prec.max(MIN_FLOAT_BITS) as usize;
        let n = BigFloat::from_i64(num, prec);
        let d = BigFloat::from_i64(den, prec);
        Mpf { value: n.div(&d, prec, RM), prec }
    }

    /// Parse a decimal or fraction string at `prec` bits.
    pub fn parse_with_prec(s: &str, prec: u32) -> Result<Self> {
        let prec = prec.max(MIN_FLOAT_BITS) as usize;
        let r = parse_rational(s)?;
        Ok(Self::from_rat(&r, prec))
    }

    fn from_rat(r: &Rat, prec: usize) -> Self {
        let digits = 2 + prec / 3; // > prec * log10(2) decimal digits
        let scaled = (r * num_traits::Pow::pow(&BigInt::from(10), digits)).round();
        let dec = format!("{}e-{}", scaled.numer(), digits);
        let value = CONSTS.with(|cc| {
            BigFloat::parse(&dec, astro_float::Radix::Dec, prec, RM, &mut cc.borrow_mut())
        });
        Mpf { value, prec }
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec as u32
    }

    fn lift(value: BigFloat, prec: usize) -> Self {
        Mpf { value, prec }
    }

    fn join(a: &Self, b: &Self) -> usize {
        a.prec.max(b.prec)
    }
}

impl PartialEq for Mpf {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Mpf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for Mpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Mpf {
    type Output = Mpf;
    fn add(self, rhs: Mpf) -> Mpf {
        let p = Mpf::join(&self, &rhs);
        Mpf::lift(self.value.add(&rhs.value, p, RM), p)
    }
}

impl Sub for Mpf {
    type Output = Mpf;
    fn sub(self, rhs: Mpf) -> Mpf {
        let p = Mpf::join(&self, &rhs);
        Mpf::lift(self.value.sub(&rhs.value, p, RM), p)
    }
}

impl Mul for Mpf {
    type Output = Mpf;
    fn mul(self, rhs: Mpf) -> Mpf {
        let p = Mpf::join(&self, &rhs);
        Mpf::lift(self.value.mul(&rhs.value, p, RM), p)
    }
}

impl Div for Mpf {
    type Output = Mpf;
    fn div(self, rhs: Mpf) -> Mpf {
        let p = Mpf::join(&self, &rhs);
        Mpf::lift(self.value.div(&rhs.value, p, RM), p)
    }
}

impl Neg for Mpf {
    type Output = Mpf;
    fn neg(self) -> Mpf {
        let p = self.prec;
        Mpf::lift(self.value.neg(), p)
    }
}

impl Scalar for Mpf {
    fn zero() -> Self {
        Mpf::int_with_prec(0, MIN_FLOAT_BITS)
    }

    fn one() -> Self {
        Mpf::int_with_prec(1, MIN_FLOAT_BITS)
    }

    fn from_int(v: i64) -> Self {
        Mpf::int_with_prec(v, 64)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Mpf::ratio_with_prec(num, den, 64)
    }

    fn from_f64(v: f64) -> Self {
        Mpf::lift(BigFloat::from_f64(v, 64), 64)
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        match self.value.as_raw_parts() {
            Some((words, _n, sign, e, _inexact)) => {
                let nw = words.len();
                let top = words[nw - 1] as f64;
                let next = if nw >= 2 { words[nw - 2] as f64 } else { 0.0 };
                // value = 0.mantissa * 2^e, mantissa normalized in [0.5, 1)
                let m = top / 2f64.powi(64) + next / 2f64.powi(128);
                let v = if e >= 1024 {
                    f64::INFINITY
                } else if e <= -1070 {
                    0.0
                } else {
                    m * 2f64.powi(e)
                };
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => {
                if self.value.is_inf_neg() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn abs(&self) -> Self {
        if self.value.is_negative() {
            self.clone().neg()
        } else {
            self.clone()
        }
    }

    fn sqrt(&self) -> Self {
        Mpf::lift(self.value.sqrt(self.prec, RM), self.prec)
    }

    fn powu(&self, e: u32) -> Self {
        Mpf::lift(self.value.powi(e as usize, self.prec, RM), self.prec)
    }

    fn recip(&self) -> Self {
        Mpf::lift(self.value.reciprocal(self.prec, RM), self.prec)
    }

    fn is_exact() -> bool {
        false
    }

    fn mode(&self) -> NumericMode {
        NumericMode::Float { precision_bits: self.prec as u32 }
    }

    fn circle_point(j: usize, samples: usize, proto: &Self) -> (Self, Self) {
        let p = proto.prec;
        let (a, b) = reduce_angle(j, samples);
        CONSTS.with(|cc| {
            let mut cc = cc.borrow_mut();
            let pi = cc.pi(p, RM);
            let frac = BigFloat::from_u64(a, p).div(&BigFloat::from_u64(b, p), p, RM);
            let theta = pi.mul(&BigFloat::from_i64(2, p), p, RM).mul(&frac, p, RM);
            let cos = theta.cos(p, RM, &mut cc);
            let sin = theta.sin(p, RM, &mut cc);
            (Mpf::lift(cos, p), Mpf::lift(sin, p))
        })
    }

    fn parse(s: &str) -> Result<Self> {
        Mpf::parse_with_prec(s, MIN_FLOAT_BITS)
    }

    fn report_str(&self) -> String {
        format!("{:.16e}", Scalar::to_f64(self))
    }
}

/// Compensated (Kahan) accumulator. Exact for [`Rat`]; for floats it keeps
/// the summation error near one ulp of the result independent of length.
#[derive(Clone, Debug)]
pub struct Compensated<S: Scalar> {
    sum: S,
    carry: S,
}

impl<S: Scalar> Compensated<S> {
    pub fn new() -> Self {
        Compensated { sum: S::zero(), carry: S::zero() }
    }

    pub fn add(&mut self, v: S) {
        let y = v - self.carry.clone();
        let t = self.sum.clone() + y.clone();
        self.carry = (t.clone() - self.sum.clone()) - y;
        self.sum = t;
    }

    pub fn total(&self) -> S {
        self.sum.clone()
    }
}

impl<S: Scalar> Default for Compensated<S> {
    fn default() -> Self {
        Self::new()
    }
}
