//! Arithmetic in `GF(p^m)` for `p^m <= 2^20`.
//!
//! Elements are encoded as integers `sum c_i p^i` where `c_0 + c_1 x + ...`
//! is the polynomial representative modulo the Conway polynomial of the
//! field. Fields with at most `2^16` elements multiply through exp/log tables
//! and add through a Zech logarithm table; larger fields fall back to
//! schoolbook polynomial arithmetic.
//!
//! When `m` is even the context also carries the subfield `GF(q)`, `q^2 =
//! p^m`, realised as the fixed field of `x -> x^q` with an explicit
//! embedding table.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::conway;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
/// Fields up to this order use exp/log tables.
pub const TABLE_ORDER: u32 = 1 << 16;

const NONE: u32 = u32::MAX;

/// A field element in canonical integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

enum Arith {
    Tables {
        /// `exp[i] = g^i`, doubled so that sums of two logs index directly.
        exp: Vec<u32>,
        log: Vec<u32>,
        /// `zech[n] = log(1 + g^n)`, `NONE` where `1 + g^n = 0`.
        zech: Vec<u32>,
    },
    Poly,
}

/// The index-2 subfield `GF(q)` of `GF(q^2)`.
pub struct Subfield {
    ctx: FieldCtx,
    embed: Vec<FieldElem>,
    restrict: Vec<u32>,
}

impl Subfield {
    /// Standalone context of `GF(q)`; its encodings differ from the ambient
    /// ones and are translated by [`Subfield::embed`] / [`Subfield::restrict`].
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.ctx.order
    }

    /// Image of a `GF(q)` element inside `GF(q^2)`.
    pub fn embed(&self, x: FieldElem) -> FieldElem {
        self.embed[x.0 as usize]
    }

    /// The `GF(q)` element corresponding to `x`, if `x` lies in the subfield.
    pub fn restrict(&self, x: FieldElem) -> Option<FieldElem> {
        match self.restrict[x.0 as usize] {
            NONE => None,
            s => Some(FieldElem(s)),
        }
    }

    pub fn contains(&self, x: FieldElem) -> bool {
        self.restrict[x.0 as usize] != NONE
    }

    /// Embedded subfield elements in ascending `GF(q)` encoding.
    pub fn elements(&self) -> &[FieldElem] {
        &self.embed
    }
}

/// Arithmetic context for `GF(p^m)`.
pub struct FieldCtx {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    arith: Arith,
    sub: Option<Box<Subfield>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod x^{}", self.p, self.m, self.m)?;
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c != 0 {
                write!(f, " + {}x^{}", c, i)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `GF(p)`, coefficients low degree first.
mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
        let mut r = 1 % m;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    }

    /// `a mod f`, `f` given in full (not necessarily monic).
    pub fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p) as u64;
        let p64 = p as u64;
        while a.len() > df {
            let da = a.len() - 1;
            let c = a[da] as u64 * lead_inv % p64;
            for i in 0..=df {
                let t = c * f[i] as u64 % p64;
                a[da - df + i] = ((a[da - df + i] as u64 + p64 - t) % p64) as u32;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), f, p)
    }

    pub fn pow_poly(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![1u32];
        let mut b = rem(a, f, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        rem(&r, f, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

impl FieldCtx {
    /// `GF(p^m)` with the shipped Conway modulus (least primitive root for
    /// `m = 1`).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::check_shape(p, m)?;
        if m == 1 {
            let g = least_primitive_root(p);
            return Self::with_modulus(p, 1, &[(p - g) % p]);
        }
        let coeffs = conway::lookup(p, m).ok_or(Error::MissingModulus { p, m })?;
        Self::with_modulus(p, m, coeffs)
    }

    /// `GF(q^2)` for a prime power `q`.
    pub fn quadratic_over(q: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, 2 * h)
    }

    fn check_shape(p: u32, m: u32) -> Result<()> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match (p as u64).checked_pow(m) {
            Some(o) if o <= MAX_ORDER => Ok(()),
            _ => Err(Error::FieldTooLarge { p, m }),
        }
    }

    /// Field with an explicit monic modulus `x^m + sum coeffs[i] x^i`.
    ///
    /// The modulus must be irreducible and `x` must generate the
    /// multiplicative group; both are verified here.
    pub fn with_modulus(p: u32, m: u32, coeffs: &[u32]) -> Result<Self> {
        Self::build(p, m, coeffs, true)
    }

    fn build(p: u32, m: u32, coeffs: &[u32], with_sub: bool) -> Result<Self> {
        Self::check_shape(p, m)?;
        if coeffs.len() != m as usize {
            return Err(Error::BadModulus {
                p,
                m,
                reason: "coefficient count differs from the degree",
            });
        }
        if coeffs.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus {
                p,
                m,
                reason: "coefficient not reduced mod p",
            });
        }
        let mut full: Vec<u32> = coeffs.to_vec();
        full.push(1);
        if !rabin_irreducible(&full, p, m) {
            return Err(Error::ReducibleModulus { p, m });
        }
        let order = p.pow(m);
        let group = order as u64 - 1;
        let x: Vec<u32> = poly::rem(&[0, 1], &full, p);
        for l in prime_factors(group) {
            if poly::pow_poly(&x, group / l, &full, p) == [1] {
                return Err(Error::NonPrimitiveModulus { p, m });
            }
        }

        let arith = if order <= TABLE_ORDER {
            build_tables(p, m, &full, order)
        } else {
            Arith::Poly
        };
        let mut ctx = FieldCtx {
            p,
            m,
            order,
            modulus: coeffs.to_vec(),
            arith,
            sub: None,
        };
        if with_sub && m % 2 == 0 {
            ctx.sub = Some(Box::new(ctx.build_subfield()?));
        }
        Ok(ctx)
    }

    fn build_subfield(&self) -> Result<Subfield> {
        let h = self.m / 2;
        let q = self.p.pow(h);
        // y = g^(q+1) generates GF(q)*; its minimal polynomial is the
        // subfield modulus (the Conway one when the ambient modulus is Conway).
        let y = self.pow(self.generator(), q as u64 + 1);
        let mut minpoly = vec![FieldElem::ONE];
        let mut root = y;
        for _ in 0..h {
            let mut next = vec![FieldElem::ZERO; minpoly.len() + 1];
            for (i, &c) in minpoly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, root));
            }
            minpoly = next;
            root = self.pow(root, self.p as u64);
        }
        let coeffs: Vec<u32> = minpoly[..h as usize]
            .iter()
            .map(|c| {
                debug_assert!(c.0 < self.p);
                c.0
            })
            .collect();
        let ctx = FieldCtx::build(self.p, h, &coeffs, false)?;
        let mut embed = Vec::with_capacity(q as usize);
        for s in ctx.elements() {
            let digits = ctx.coeffs(s);
            let mut acc = FieldElem::ZERO;
            let mut ypow = FieldElem::ONE;
            for &d in &digits {
                acc = self.add(acc, self.mul(FieldElem(d), ypow));
                ypow = self.mul(ypow, y);
            }
            embed.push(acc);
        }
        let mut restrict = vec![NONE; self.order as usize];
        for (s, e) in embed.iter().enumerate() {
            restrict[e.0 as usize] = s as u32;
        }
        Ok(Subfield { ctx, embed, restrict })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients `c_0 .. c_{m-1}` (the leading `1` is implicit).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn uses_tables(&self) -> bool {
        matches!(self.arith, Arith::Tables { .. })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The root `x` of the modulus, a primitive element.
    pub fn generator(&self) -> FieldElem {
        if self.m == 1 {
            FieldElem((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElem(self.p)
        }
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value < self.order {
            Ok(FieldElem(value))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.order).map(FieldElem)
    }

    /// Polynomial coefficients of `x`, low degree first, length `m`.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem> {
        if c.len() != self.m as usize {
            return Err(Error::DimensionMismatch {
                expected: self.m as usize,
                got: c.len(),
            });
        }
        let mut v = 0u32;
        for &d in c.iter().rev() {
            if d >= self.p {
                return Err(Error::ElementOutOfRange {
                    value: d,
                    order: self.p,
                });
            }
            v = v * self.p + d;
        }
        Ok(FieldElem(v))
    }

    /// The element `n * 1` of the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &self.arith {
            Arith::Tables { exp, log, zech } => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.order - 1;
                let la = log[a.0 as usize];
                let lb = log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + n - la };
                match zech[d as usize] {
                    NONE => FieldElem::ZERO,
                    z => FieldElem(exp[(la + z) as usize]),
                }
            }
            Arith::Poly => self.digitwise(a, b, |x, y, p| (x + y) % p),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        match &self.arith {
            Arith::Tables { exp, log, .. } => FieldElem(exp[(log[a.0 as usize] + (self.order - 1) / 2) as usize]),
            Arith::Poly => self.digitwise(FieldElem::ZERO, a, |x, y, p| (x + p - y) % p),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.arith {
            Arith::Tables { exp, log, .. } => FieldElem(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize]),
            Arith::Poly => {
                let mut full = self.modulus.clone();
                full.push(1);
                let prod = poly::mul_mod(&self.coeffs(a), &self.coeffs(b), &full, self.p);
                self.reduce_poly(&prod)
            }
        }
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        match &self.arith {
            Arith::Tables { exp, log, .. } => FieldElem(exp[(self.order - 1 - log[a.0 as usize]) as usize]),
            Arith::Poly => self.pow(a, self.order as u64 - 2),
        }
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.arith {
            Arith::Tables { exp, log, .. } => {
                let n = self.order as u64 - 1;
                FieldElem(exp[((log[a.0 as usize] as u64 * (e % n)) % n) as usize])
            }
            Arith::Poly => {
                let mut r = FieldElem::ONE;
                let mut b = a;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        r = self.mul(r, b);
                    }
                    b = self.mul(b, b);
                    e >>= 1;
                }
                r
            }
        }
    }

    /// Discrete log with respect to [`FieldCtx::generator`]; table fields only.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        match &self.arith {
            Arith::Tables { log, .. } if a.0 != 0 => Some(log[a.0 as usize]),
            _ => None,
        }
    }

    pub fn exp(&self, i: u64) -> FieldElem {
        self.pow(self.generator(), i)
    }

    fn digitwise(&self, a: FieldElem, b: FieldElem, f: impl Fn(u32, u32, u32) -> u32) -> FieldElem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += f(x % self.p, y % self.p, self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElem(out)
    }

    fn reduce_poly(&self, c: &[u32]) -> FieldElem {
        let mut v = 0u32;
        for &d in c.iter().rev() {
            v = v * self.p + d;
        }
        FieldElem(v)
    }

    /// The subfield `GF(q)` when the degree is even.
    pub fn subfield(&self) -> Result<&Subfield> {
        self.sub.as_deref().ok_or(Error::NoSubfield { p: self.p, m: self.m })
    }

    /// `q` such that this field is `GF(q^2)`.
    pub fn sub_order(&self) -> Result<u32> {
        self.subfield().map(Subfield::order)
    }

    /// `x -> x^q` on `GF(q^2)`.
    pub fn frobenius_q(&self, x: FieldElem) -> Result<FieldElem> {
        let q = self.sub_order()?;
        Ok(self.pow(x, q as u64))
    }

    /// `(x + x^q, x^(q+1))`, both in the subfield (returned in ambient
    /// encoding).
    pub fn trace_norm(&self, x: FieldElem) -> Result<(FieldElem, FieldElem)> {
        let sub = self.subfield()?;
        let xq = self.pow(x, sub.order() as u64);
        let t = self.add(x, xq);
        let n = self.mul(x, xq);
        assert!(sub.contains(t) && sub.contains(n), "trace/norm escaped the subfield");
        Ok((t, n))
    }

    /// Whether `x` is a square; refused in characteristic 2.
    pub fn is_square(&self, x: FieldElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if x.0 == 0 {
            return Ok(true);
        }
        Ok(match self.log(x) {
            Some(l) => l % 2 == 0,
            None => self.pow(x, (self.order as u64 - 1) / 2) == FieldElem::ONE,
        })
    }

    /// Absolute trace `sum_{i<m} x^(p^i)`, an element of the prime field.
    pub fn trace_to_prime(&self, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc
    }
}

fn build_tables(p: u32, m: u32, full: &[u32], order: u32) -> Arith {
    let n = (order - 1) as usize;
    let mut exp = vec![0u32; 2 * n];
    let mut log = vec![NONE; order as usize];
    let mut digits = vec![0u32; m as usize];
    digits[0] = 1;
    let enc = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
    let gen_m1 = if m == 1 { (p - full[0]) % p } else { 0 };
    for i in 0..n {
        let e = enc(&digits);
        exp[i] = e;
        exp[i + n] = e;
        log[e as usize] = i as u32;
        if m == 1 {
            digits[0] = ((digits[0] as u64 * gen_m1 as u64) % p as u64) as u32;
        } else {
            // multiply by x and reduce by the monic modulus
            let top = digits[m as usize - 1];
            for j in (1..m as usize).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for j in 0..m as usize {
                    let t = (top as u64 * full[j] as u64 % p as u64) as u32;
                    digits[j] = (digits[j] + p - t) % p;
                }
            }
        }
    }
    let mut zech = vec![NONE; n.max(1)];
    for (k, z) in zech.iter_mut().enumerate().take(n) {
        let e = exp[k];
        // 1 + e: bump the constant digit
        let c0 = e % p;
        let s = e - c0 + (c0 + 1) % p;
        if s != 0 {
            *z = log[s as usize];
        }
    }
    Arith::Tables { exp, log, zech }
}

fn rabin_irreducible(full: &[u32], p: u32, m: u32) -> bool {
    if m == 1 {
        return true;
    }
    if full[0] == 0 {
        return false;
    }
    let x = vec![0u32, 1];
    let frob_iter = |k: u32| {
        let mut y = x.clone();
        for _ in 0..k {
            y = poly::pow_poly(&y, p as u64, full, p);
        }
        y
    };
    if poly::sub(&frob_iter(m), &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    for l in prime_factors(m as u64) {
        let d = poly::sub(&frob_iter(m / l as u32), &x, p);
        let g = poly::gcd(full, &d, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = p as u64 - 1;
    let fs = prime_factors(n);
    (2..p)
        .find(|&g| fs.iter().all(|&l| poly::pow_mod(g as u64, n / l, p as u64) != 1))
        .expect("every prime has a primitive root")
}

/// `(p, h)` with `q = p^h`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut h = 0;
    let mut v = q;
    while v % p == 0 {
        v /= p;
        h += 1;
    }
    (v == 1).then_some((p, h))
}
