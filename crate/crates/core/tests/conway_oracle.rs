//! Recomputes Conway polynomials from their definition and compares them
//! with the moduli the library ships.

use std::collections::HashMap;

use qherm_core::FieldCtx;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// `a * b mod f` for monic `f` of degree `m`, coefficients low to high.
fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for i in 0..=m {
                prod[k - m + i] = (prod[k - m + i] + (p - c) * f[i]) % p;
            }
        }
    }
    prod.truncate(m);
    prod
}

fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut acc = vec![0u64; m];
    acc[0] = 1;
    let mut b = base.to_vec();
    b.resize(m, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

/// Evaluates `g` (coefficients low to high over GF(p)) at `x` in GF(p)[t]/f.
fn eval_at(g: &[u64], x: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut acc = vec![0u64; m];
    for &c in g.iter().rev() {
        acc = mul_mod(&acc, x, f, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

struct Oracle {
    cache: HashMap<(u64, u32), Vec<u64>>,
}

impl Oracle {
    /// Full monic Conway polynomial, low to high.
    fn conway(&mut self, p: u64, m: u32) -> Vec<u64> {
        if let Some(c) = self.cache.get(&(p, m)) {
            return c.clone();
        }
        let order = p.pow(m) - 1;
        let factors = prime_factors(order);
        let subs: Vec<(u32, Vec<u64>)> = (1..m).filter(|d| m % d == 0).map(|d| (d, self.conway(p, d))).collect();
        let mut a = vec![0u64; m as usize];
        let found = loop {
            // x^m - a_1 x^(m-1) + a_2 x^(m-2) - ... with (a_1 .. a_m) lex least
            let mut f = vec![0u64; m as usize + 1];
            f[m as usize] = 1;
            for i in 1..=m as usize {
                let c = if i % 2 == 1 { (p - a[i - 1]) % p } else { a[i - 1] };
                f[m as usize - i] = c;
            }
            let x = {
                let mut v = vec![0u64; m as usize];
                if m == 1 {
                    v[0] = (p - f[0]) % p;
                } else {
                    v[1] = 1;
                }
                v
            };
            let one = {
                let mut v = vec![0u64; m as usize];
                v[0] = 1;
                v
            };
            let primitive = f[0] != 0
                && pow_mod(&x, order, &f, p) == one
                && factors.iter().all(|l| pow_mod(&x, order / l, &f, p) != one);
            let compatible = primitive
                && subs.iter().all(|(d, g)| {
                    let y = pow_mod(&x, order / (p.pow(*d) - 1), &f, p);
                    eval_at(g, &y, &f, p).iter().all(|&c| c == 0)
                });
            if compatible {
                break f;
            }
            // next tuple in lexicographic order
            let mut i = m as usize;
            loop {
                assert!(i > 0, "no Conway polynomial found for {p}^{m}");
                i -= 1;
                a[i] += 1;
                if a[i] < p {
                    break;
                }
                a[i] = 0;
            }
        };
        self.cache.insert((p, m), found.clone());
        found
    }
}

fn compare_up_to(limit: u64) -> usize {
    let mut oracle = Oracle { cache: HashMap::new() };
    let mut checked = 0;
    for p in (2..=limit).filter(|&p| is_prime(p)) {
        let mut m = 1;
        while p.pow(m) <= limit {
            let f = oracle.conway(p, m);
            let ctx = FieldCtx::new(p as u32, m).unwrap();
            let shipped: Vec<u64> = ctx.modulus().iter().map(|&c| c as u64).collect();
            assert_eq!(shipped, f[..m as usize], "modulus of GF({p}^{m})");
            checked += 1;
            m += 1;
        }
    }
    checked
}

#[test]
fn shipped_moduli_match_definition() {
    // also covers m = 1, where the modulus is x - (least primitive root)
    assert!(compare_up_to(1 << 14) > 40);
}

#[test]
fn known_values() {
    // a few classical entries
    let m = |p, m| FieldCtx::new(p, m).unwrap().modulus().to_vec();
    assert_eq!(m(2, 2), [1, 1]);
    assert_eq!(m(3, 2), [2, 2]);
    assert_eq!(m(2, 4), [1, 1, 0, 0]);
    assert_eq!(m(5, 2), [2, 4]);
    assert_eq!(m(2, 8), [1, 0, 1, 1, 1, 0, 0, 0]);
}

#[test]
#[ignore = "regenerates the whole table, slow"]
fn full_table_regeneration() {
    compare_up_to(1 << 20);
}
