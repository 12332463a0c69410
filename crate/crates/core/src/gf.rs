//! Small finite fields GF(p^m), with full addition and multiplication tables.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial reduced modulo a fixed monic irreducible of
//! degree `m` (the lexicographically smallest one).

/// Largest field order supported.
pub const MAX_ORDER: u32 = 256;

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

/// `Some((p, m))` when `q = p^m` for a prime `p`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Factorization into prime powers, increasing by prime.
pub fn prime_power_factors(mut v: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while v > 1 {
        if v.is_multiple_of(d) {
            let mut q = 1;
            while v.is_multiple_of(d) {
                v /= d;
                q *= d;
            }
            out.push(q);
        }
        d += 1;
    }
    out
}

fn digits(x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut x = x;
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` (coefficients low to high) modulo the monic `modulus`.
fn poly_rem(mut a: Vec<u32>, modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    while a.len() > deg {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - deg;
            for (i, &c) in modulus[..deg].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - (lead * c) % p) % p;
            }
        }
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Irreducible iff no monic factor of degree 1..=m/2 divides it.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    pub fn new(q: u32) -> Option<Self> {
        let (p, m) = prime_power(q)?;
        if q > MAX_ORDER {
            return None;
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut f = digits(low, p, m);
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))?
        };
        let size = q as usize;
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p);
                let prod = if m == 1 {
                    vec![(a * b) % p]
                } else {
                    poly_rem(poly_mul(&da, &db, p), &modulus, p)
                };
                mul[(a * q + b) as usize] = undigits(&prod, p);
            }
        }
        Some(GaloisField { p, m, q, add, mul })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn pow(&self, a: u32, e: usize) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }
}
