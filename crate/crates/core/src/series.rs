//! Exact truncated series near the large complex structure point: the
//! Frobenius solutions `I_{0,q}`, the recursion `I_{p,q}`, the mirror map and
//! the Yukawa coupling, all in `z` and the formal log-variable `L = t = log z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, q, qi, Q};

/// Largest power of `L` carried by [`LogSeries`]; `I_{0,4}` needs `L^4`.
pub const MAX_L_DEGREE: usize = 4;

/// `sum_{n < len} c_n z^n + O(z^len)` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeriesQ {
    #[serde(with = "crate::rational::serde_q_vec")]
    coeffs: Vec<Q>,
}

impl PowerSeriesQ {
    pub fn new(coeffs: Vec<Q>) -> Self {
        PowerSeriesQ { coeffs }
    }

    pub fn from_ints(c: &[i64], len: usize) -> Self {
        let mut coeffs: Vec<Q> = c.iter().map(|&x| qi(x)).take(len).collect();
        coeffs.resize(len, Q::zero());
        PowerSeriesQ { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        PowerSeriesQ {
            coeffs: vec![Q::zero(); len],
        }
    }

    pub fn one(len: usize) -> Self {
        PowerSeriesQ::from_ints(&[1], len)
    }

    /// `1 / (1 - a z)`.
    pub fn geometric(a: i64, len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        let mut p = BigInt::one();
        for _ in 0..len {
            c.push(Q::from_integer(p.clone()));
            p *= a;
        }
        PowerSeriesQ { coeffs: c }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, len: usize) -> Self {
        PowerSeriesQ {
            coeffs: self.coeffs.iter().take(len).cloned().collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        let n = self.len().min(o.len());
        PowerSeriesQ {
            coeffs: (0..n).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, k: &Q) -> Self {
        PowerSeriesQ {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeriesQ { coeffs: out }
    }

    /// Multiplication by `z`; the known length grows by one.
    pub fn shift(&self) -> Self {
        let mut c = Vec::with_capacity(self.len() + 1);
        c.push(Q::zero());
        c.extend(self.coeffs.iter().cloned());
        PowerSeriesQ { coeffs: c }
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeffs.first().ok_or(Error::NonUnit)?;
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv0 = c0.recip();
        let n = self.len();
        let mut r: Vec<Q> = Vec::with_capacity(n);
        r.push(inv0.clone());
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &r[k - j];
                }
            }
            r.push(-s * &inv0);
        }
        Ok(PowerSeriesQ { coeffs: r })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `θ = z d/dz`.
    pub fn theta(&self) -> Self {
        PowerSeriesQ {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * qi(n as i64))
                .collect(),
        }
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(0) != Q::one() {
            return Err(Error::NonUnit);
        }
        let r = self.theta().div(self)?;
        Ok(PowerSeriesQ {
            coeffs: r
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n == 0 { Q::zero() } else { c / qi(n as i64) })
                .collect(),
        })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonUnit);
        }
        let n = self.len();
        let mut e: Vec<Q> = Vec::with_capacity(n);
        e.push(Q::one());
        for m in 1..n {
            let mut s = Q::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s += &self.coeffs[k] * qi(k as i64) * &e[m - k];
                }
            }
            e.push(s / qi(m as i64));
        }
        Ok(PowerSeriesQ { coeffs: e })
    }

    /// `self(g(z))` for `g(0) = 0`, to the shorter of the two lengths.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(Error::NonUnit);
        }
        let n = self.len().min(g.len());
        let g = g.truncate(n);
        let mut acc = PowerSeriesQ::zero(n);
        for c in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Derivative `d/dz`; the known length drops by one.
    pub fn derivative(&self) -> Self {
        PowerSeriesQ {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * qi(n as i64))
                .collect(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// `sum_k L^k f_k(z)` with `L = t = log z` a formal symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    parts: Vec<PowerSeriesQ>,
    len: usize,
}

impl LogSeries {
    pub fn pure(s: PowerSeriesQ) -> Self {
        let len = s.len();
        LogSeries {
            parts: vec![s],
            len,
        }
        .trimmed()
    }

    pub fn from_parts(parts: Vec<PowerSeriesQ>) -> Result<Self> {
        let len = parts.iter().map(|p| p.len()).min().unwrap_or(0);
        let s = LogSeries {
            parts: parts.into_iter().map(|p| p.truncate(len)).collect(),
            len,
        }
        .trimmed();
        if s.parts.len() > MAX_L_DEGREE + 1 {
            return Err(Error::Config(format!(
                "L-degree {} exceeds {MAX_L_DEGREE}",
                s.parts.len() - 1
            )));
        }
        Ok(s)
    }

    /// The symbol `L` itself.
    pub fn l(len: usize) -> Self {
        LogSeries {
            parts: vec![PowerSeriesQ::zero(len), PowerSeriesQ::one(len)],
            len,
        }
    }

    pub fn zero(len: usize) -> Self {
        LogSeries { parts: vec![], len }
    }

    fn trimmed(mut self) -> Self {
        while self.parts.last().is_some_and(|p| p.is_zero()) {
            self.parts.pop();
        }
        self
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Highest power of `L` present; `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.parts.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, k: usize) -> PowerSeriesQ {
        self.parts
            .get(k)
            .cloned()
            .unwrap_or_else(|| PowerSeriesQ::zero(self.len))
    }

    pub fn as_pure(&self) -> Option<PowerSeriesQ> {
        (self.parts.len() <= 1).then(|| self.part(0))
    }

    fn combine(&self, o: &Self, f: impl Fn(&PowerSeriesQ, &PowerSeriesQ) -> PowerSeriesQ) -> Self {
        let len = self.len.min(o.len);
        let n = self.parts.len().max(o.parts.len());
        LogSeries {
            parts: (0..n)
                .map(|k| f(&self.part(k).truncate(len), &o.part(k).truncate(len)))
                .collect(),
            len,
        }
        .trimmed()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, k: &Q) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.scale(k)).collect(),
            len: self.len,
        }
        .trimmed()
    }

    pub fn mul_pure(&self, s: &PowerSeriesQ) -> Self {
        let len = self.len.min(s.len());
        LogSeries {
            parts: self.parts.iter().map(|p| p.truncate(len).mul(s)).collect(),
            len,
        }
        .trimmed()
    }

    pub fn div_pure(&self, s: &PowerSeriesQ) -> Result<Self> {
        Ok(self.mul_pure(&s.inv()?))
    }

    /// Multiplication by `z`, truncated back to the current length.
    pub fn mul_z(&self) -> Self {
        LogSeries {
            parts: self
                .parts
                .iter()
                .map(|p| p.shift().truncate(self.len))
                .collect(),
            len: self.len,
        }
        .trimmed()
    }

    /// `d/dt` with `d/dt (z^n L^k) = n z^n L^k + k z^n L^(k-1)`.
    pub fn dt(&self) -> Self {
        let n = self.parts.len();
        let parts = (0..n)
            .map(|k| {
                let mut p = self.parts[k].theta();
                if k + 1 < n {
                    p = p.add(&self.parts[k + 1].scale(&qi(k as i64 + 1)));
                }
                p
            })
            .collect();
        LogSeries {
            parts,
            len: self.len,
        }
        .trimmed()
    }

    pub fn truncate(&self, len: usize) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.truncate(len)).collect(),
            len: len.min(self.len),
        }
        .trimmed()
    }
}

/// `P = sum_k a_k(z) θ^k` with polynomial coefficients (lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PFOperator {
    pub a: Vec<Vec<Q>>,
}

impl PFOperator {
    /// `θ^n - c z prod (θ + r)` for the listed shifts `r`; `n` is the number of shifts.
    pub fn hypergeometric(c: i64, shifts: &[Q]) -> Self {
        // Coefficients of prod (θ + r) in θ, lowest first.
        let mut poly = vec![Q::one()];
        for r in shifts {
            let mut next = vec![Q::zero(); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i] += p * r;
                next[i + 1] += p;
            }
            poly = next;
        }
        let n = shifts.len();
        let a = (0..=n)
            .map(|k| {
                let lead = if k == n { Q::one() } else { Q::zero() };
                vec![lead, -&poly[k] * qi(c)]
            })
            .collect();
        PFOperator { a }
    }

    /// `θ^4 - 3^6 z (θ + 1/3)^2 (θ + 2/3)^2`.
    pub fn three_three() -> Self {
        let op = PFOperator::hypergeometric(729, &[q(1, 3), q(1, 3), q(2, 3), q(2, 3)]);
        debug_assert_eq!(op.a[4], vec![qi(1), qi(-729)]);
        debug_assert_eq!(op.a[3], vec![qi(0), qi(-1458)]);
        op
    }

    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficient_series(&self, k: usize, len: usize) -> PowerSeriesQ {
        let mut c = self.a[k].clone();
        c.resize(len.max(c.len()), Q::zero());
        PowerSeriesQ::new(c).truncate(len)
    }
}

/// Applies the operator exactly; the result is known to the input length.
pub fn pf_apply(op: &PFOperator, s: &LogSeries) -> LogSeries {
    let len = s.len();
    let mut acc = LogSeries::zero(len);
    let mut deriv = s.clone();
    for k in 0..=op.order() {
        let coeff = op.coefficient_series(k, len);
        acc = acc.add(&deriv.mul_pure(&coeff));
        deriv = deriv.dt();
    }
    acc
}

/// Polynomial arithmetic in `w` modulo `w^W`.
fn wmul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len();
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn winv(a: &[Q]) -> Vec<Q> {
    PowerSeriesQ::new(a.to_vec())
        .inv()
        .expect("unit constant term")
        .coeffs
}

/// `S_j(z) = sum_d z^d [w^j] prod_{r<=3d}(3w+r)^2 / prod_{r<=d}(w+r)^6`, for `j < width`.
pub fn frobenius_coefficients(len: usize, width: usize) -> Vec<PowerSeriesQ> {
    let mut s = vec![vec![Q::zero(); len]; width];
    let lin = |a: i64, r: i64| -> Vec<Q> {
        let mut v = vec![Q::zero(); width];
        v[0] = qi(r);
        if width > 1 {
            v[1] = qi(a);
        }
        v
    };
    let mut num = {
        let mut v = vec![Q::zero(); width];
        v[0] = Q::one();
        v
    };
    let mut den = num.clone();
    for d in 0..len {
        if d > 0 {
            for r in (3 * d - 2)..=(3 * d) {
                let f = lin(3, r as i64);
                num = wmul(&num, &wmul(&f, &f));
            }
            let f = lin(1, d as i64);
            for _ in 0..6 {
                den = wmul(&den, &f);
            }
        }
        let c = wmul(&num, &winv(&den));
        for (j, cj) in c.into_iter().enumerate() {
            s[j][d] = cj;
        }
    }
    s.into_iter().map(PowerSeriesQ::new).collect()
}

/// `I_{0,q}` for `q = 0..=4`: coefficients of `w^q` in `e^{wL} R(w, z)`.
pub fn i0_series(len: usize) -> Result<Vec<LogSeries>> {
    if len < 1 {
        return Err(Error::Config("series order must be at least 1".into()));
    }
    let width = MAX_L_DEGREE + 1;
    let s = frobenius_coefficients(len, width);
    (0..width)
        .map(|qdeg| {
            let parts = (0..=qdeg)
                .map(|k| {
                    s[qdeg - k].scale(&Q::new(BigInt::one(), BigInt::from(factorial(k as u64))))
                })
                .collect();
            LogSeries::from_parts(parts)
        })
        .collect()
}

/// `I_{p,q}` for `0 <= p, q <= 4`, via `I_{p,q} = d/dt (I_{p-1,q} / I_{p-1,p-1})`.
pub fn ipq_table(len: usize) -> Result<Vec<Vec<LogSeries>>> {
    let width = MAX_L_DEGREE + 1;
    let mut table: Vec<Vec<LogSeries>> = vec![i0_series(len)?];
    for p in 1..width {
        let prev = &table[p - 1];
        let pivot = prev[p - 1].as_pure().ok_or_else(|| {
            Error::LogCancellation(format!("I_{{{0},{0}}} is not a pure series", p - 1))
        })?;
        let inv = pivot.inv()?;
        let row = (0..width).map(|qd| prev[qd].mul_pure(&inv).dt()).collect();
        table.push(row);
    }
    Ok(table)
}

/// The mirror coordinate `Q = z exp(J̃)` with `log Q = I_{0,1} / I_{0,0} = L + J̃`.
#[derive(Clone, Debug)]
pub struct MirrorMap {
    pub log_q: LogSeries,
    pub j_tilde: PowerSeriesQ,
    pub q_over_z: PowerSeriesQ,
}

impl MirrorMap {
    /// `Q(z)` itself, known to the same length.
    pub fn q_series(&self) -> PowerSeriesQ {
        self.q_over_z.shift().truncate(self.q_over_z.len())
    }
}

pub fn mirror_map(len: usize) -> Result<MirrorMap> {
    let i0 = i0_series(len)?;
    mirror_map_from(&i0)
}

pub fn mirror_map_from(i0: &[LogSeries]) -> Result<MirrorMap> {
    let base = i0[0]
        .as_pure()
        .ok_or_else(|| Error::LogCancellation("I_{0,0} has log terms".into()))?;
    let log_q = i0[1].div_pure(&base)?;
    let len = log_q.len();
    if log_q.degree() != Some(1) || log_q.part(1) != PowerSeriesQ::one(len) {
        return Err(Error::LogCancellation(
            "log Q is not L plus a series".into(),
        ));
    }
    let j_tilde = log_q.part(0);
    let q_over_z = j_tilde.exp()?;
    Ok(MirrorMap {
        log_q,
        j_tilde,
        q_over_z,
    })
}

/// Compositional inverse `z(Q)` of `Q = z * u(z)` with `u(0) = 1`, by Newton iteration.
pub fn invert_mirror(q_over_z: &PowerSeriesQ) -> Result<PowerSeriesQ> {
    let len = q_over_z.len();
    if q_over_z.coeff(0) != Q::one() {
        return Err(Error::NonUnit);
    }
    let f = q_over_z.shift().truncate(len);
    // f' is known to one term less; the missing term only meets the residual,
    // which is already O(Q^2), so padding with zero is exact to length `len`.
    let mut fprime = f.derivative();
    fprime.coeffs.resize(len, Q::zero());
    let mut ident = PowerSeriesQ::zero(len);
    if len > 1 {
        ident.coeffs[1] = Q::one();
    }
    // z <- z - (f(z) - Q) / f'(z); the number of correct terms doubles each step.
    let mut z = ident.clone();
    let mut correct = 2;
    while correct < len {
        let residual = f.compose(&z)?.sub(&ident);
        let step = residual.div(&fprime.compose(&z)?)?;
        z = z.sub(&step);
        correct *= 2;
    }
    Ok(z)
}

/// Solves `θY = -(1/2)(a_3/a_4) Y`, `Y(0) = 1`, for a fourth-order operator.
pub fn yukawa_from_pf(op: &PFOperator, len: usize) -> Result<PowerSeriesQ> {
    if op.order() != 4 {
        return Err(Error::SingularOperator(
            "Yukawa equation needs a fourth-order operator",
        ));
    }
    let a4 = op.coefficient_series(4, len);
    if a4.coeff(0).is_zero() {
        return Err(Error::SingularOperator("a_4(0) = 0"));
    }
    let r = op.coefficient_series(3, len).div(&a4)?.scale(&q(-1, 2));
    if !r.coeff(0).is_zero() {
        return Err(Error::SingularOperator(
            "a_3(0) != 0 admits no normalized solution",
        ));
    }
    let mut y: Vec<Q> = vec![Q::one()];
    for n in 1..len {
        let mut s = Q::zero();
        for k in 1..=n {
            s += r.coeff(k) * &y[n - k];
        }
        y.push(s / qi(n as i64));
    }
    Ok(PowerSeriesQ::new(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_series_basics() {
        let g = PowerSeriesQ::geometric(729, 6);
        let one_minus = PowerSeriesQ::from_ints(&[1, -729], 6);
        assert_eq!(g.mul(&one_minus), PowerSeriesQ::one(6));
        assert_eq!(one_minus.inv().unwrap(), g);
        assert!(PowerSeriesQ::from_ints(&[0, 1], 4).inv().is_err());
        let x = PowerSeriesQ::from_ints(&[0, 3, -2, 5], 8);
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
    }

    #[test]
    fn composition() {
        let f = PowerSeriesQ::from_ints(&[1, 2, 3, 4, 5], 5);
        let ident = PowerSeriesQ::from_ints(&[0, 1], 5);
        assert_eq!(f.compose(&ident).unwrap(), f);
        assert!(f.compose(&PowerSeriesQ::one(5)).is_err());
    }

    #[test]
    fn frobenius_leading_values() {
        let i0 = i0_series(4).unwrap();
        let base = i0[0].as_pure().unwrap();
        assert_eq!(base.coeffs()[..3], [qi(1), qi(36), qi(8100)]);
        let hol1 = i0[1].part(0);
        assert_eq!(hol1.coeff(1), qi(180));
        for (k, s) in i0.iter().enumerate() {
            assert_eq!(s.degree(), Some(k));
        }
    }

    #[test]
    fn operator_expansion() {
        let op = PFOperator::three_three();
        assert_eq!(op.a[4], vec![qi(1), qi(-729)]);
        assert_eq!(op.a[3], vec![qi(0), qi(-1458)]);
        assert_eq!(op.a[2], vec![qi(0), qi(-1053)]);
        assert_eq!(op.a[1], vec![qi(0), qi(-324)]);
        assert_eq!(op.a[0], vec![qi(0), qi(-36)]);
        let image = pf_apply(&op, &LogSeries::pure(PowerSeriesQ::one(5)));
        assert_eq!(
            image.as_pure().unwrap(),
            PowerSeriesQ::from_ints(&[0, -36], 5)
        );
        assert_eq!(qi(-729) * q(1, 9) * q(4, 9), qi(-36));
    }

    #[test]
    fn derivation_rule() {
        // d/dt (z^2 L^3) = 2 z^2 L^3 + 3 z^2 L^2.
        let mut parts = vec![PowerSeriesQ::zero(4); 4];
        parts[3] = PowerSeriesQ::from_ints(&[0, 0, 1], 4);
        let s = LogSeries::from_parts(parts).unwrap();
        let d = s.dt();
        assert_eq!(d.part(3), PowerSeriesQ::from_ints(&[0, 0, 2], 4));
        assert_eq!(d.part(2), PowerSeriesQ::from_ints(&[0, 0, 3], 4));
        assert!(d.part(1).is_zero());
    }

    #[test]
    fn mirror_map_low_order() {
        let mm = mirror_map(6).unwrap();
        assert!(mm.j_tilde.coeff(0).is_zero());
        assert_eq!(mm.q_series().coeffs()[..3], [qi(0), qi(1), qi(180)]);
        let z = invert_mirror(&mm.q_over_z).unwrap();
        assert_eq!(z.coeffs()[..3], [qi(0), qi(1), qi(-180)]);
        assert_eq!(
            mm.q_series().compose(&z).unwrap(),
            PowerSeriesQ::from_ints(&[0, 1], 6)
        );
        assert_eq!(
            z.compose(&mm.q_series()).unwrap(),
            PowerSeriesQ::from_ints(&[0, 1], 6)
        );
        assert_eq!(
            invert_mirror(&PowerSeriesQ::one(6)).unwrap(),
            PowerSeriesQ::from_ints(&[0, 1], 6)
        );
    }

    #[test]
    fn yukawa() {
        let op = PFOperator::three_three();
        assert_eq!(
            yukawa_from_pf(&op, 8).unwrap(),
            PowerSeriesQ::geometric(729, 8)
        );
        let mut flat = op.clone();
        flat.a[3] = vec![qi(0)];
        assert_eq!(yukawa_from_pf(&flat, 8).unwrap(), PowerSeriesQ::one(8));
        let mut bad = op;
        bad.a[4] = vec![qi(0), qi(1)];
        assert!(yukawa_from_pf(&bad, 8).is_err());
    }

    #[test]
    fn ipq_low_order() {
        let t = ipq_table(3).unwrap();
        assert_eq!(
            t[1][1].as_pure().unwrap(),
            PowerSeriesQ::from_ints(&[1, 180, 79380], 3)
        );
        for p in 0..5 {
            for qd in 0..p {
                assert!(t[p][qd].is_zero());
            }
        }
    }

    #[test]
    fn diagonal_product_and_annihilation() {
        let len = 8;
        let t = ipq_table(len).unwrap();
        let diag: Vec<PowerSeriesQ> = (0..5).map(|p| t[p][p].as_pure().unwrap()).collect();
        assert_eq!(
            diag[0].coeffs()[..5],
            [qi(1), qi(36), qi(8100), qi(2822400), qi(1200622500)]
        );
        assert_eq!(
            diag[2].coeffs()[..4],
            [qi(1), qi(297), qi(168561), qi(106224345)]
        );
        assert_eq!(diag[3], diag[1]);
        assert_eq!(diag[4], diag[0]);
        let prod = diag.iter().skip(1).fold(diag[0].clone(), |a, b| a.mul(b));
        assert_eq!(prod, PowerSeriesQ::geometric(729, len));
        let op = PFOperator::three_three();
        for s in i0_series(len).unwrap().iter().take(4) {
            assert!(pf_apply(&op, s).is_zero());
        }
        // The L^4 solution is not annihilated: the operator has order four.
        assert!(!pf_apply(&op, &i0_series(len).unwrap()[4]).is_zero());
    }
}
