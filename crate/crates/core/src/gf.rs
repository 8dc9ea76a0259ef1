//! Table-driven arithmetic for the tower GF(p) ⊂ GF(q) ⊂ GF(q³).
//!
//! GF(q) is built from polynomials over GF(p) modulo a monic irreducible of
//! degree `h`; GF(q³) is built as a cubic extension of GF(q). Elements of
//! both are identified by integer indices: the polynomial coordinates read
//! as a base-`p` (resp. base-`q`) number, lowest degree first. Under this
//! encoding the base field sits inside GF(q³) as the indices `0..q`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported base field order. GF(q³) then has at most 4096 elements
/// and GF(q) elements fit in a nibble, which the table layout relies on.
pub const MAX_Q: u32 = 16;

/// An element of GF(q³), identified by its index in `0..q³`.
///
/// Index 0 is zero and index 1 is one; indices below `q` are exactly the
/// elements of the base field GF(q).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elt(u16);

impl Elt {
    pub const ZERO: Elt = Elt(0);
    pub const ONE: Elt = Elt(1);

    pub const fn new(index: u16) -> Self {
        Elt(index)
    }

    pub const fn index(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Embeds a base-field element (given by its GF(q) index).
    pub const fn from_base(c: u8) -> Self {
        Elt(c as u16)
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^h` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut h) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

// Dense polynomials over GF(p), low degree first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let d = m.len() - 1;
        let mut r = a.to_vec();
        trim(&mut r);
        while r.len() > d && !(r.len() == 1 && r[0] == 0) {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - d;
            for (k, &c) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - (lead * c) % p) % p;
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the
    /// base-`p` digits of `n`.
    pub fn monic_from_index(n: u32, deg: usize, p: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(deg + 1);
        let mut n = n;
        for _ in 0..deg {
            out.push(n % p);
            n /= p;
        }
        out.push(1);
        out
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree at most `deg / 2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        if deg <= 1 {
            return deg == 1;
        }
        for k in 1..=deg / 2 {
            for n in 0..p.pow(k as u32) {
                let g = monic_from_index(n, k, p);
                let r = rem(f, &g, p);
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Arithmetic in GF(q) through 16×16 lookup tables.
#[derive(Clone)]
pub struct BaseField {
    p: u8,
    h: u8,
    q: u8,
    modulus: Vec<u8>,
    add: [u8; 256],
    mul: [u8; 256],
    neg: [u8; 16],
    inv: [u8; 16],
    exp: Vec<u8>,
    log: [u8; 16],
}

#[inline(always)]
const fn slot(a: u8, b: u8) -> usize {
    ((a as usize) << 4) | b as usize
}

impl BaseField {
    fn build(p: u32, h: u32, modulus: Vec<u8>) -> Self {
        let q = p.pow(h);
        let m: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        let digits = |x: u32| -> Vec<u32> { (0..h).map(|i| x / p.pow(i) % p).collect() };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = [0u8; 256];
        let mut mul = [0u8; 256];
        let mut neg = [0u8; 16];
        for a in 0..q {
            let da = digits(a);
            let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = encode(&na) as u8;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[slot(a as u8, b as u8)] = encode(&s) as u8;
                let mut r = poly::rem(&poly::mul(&da, &db, p), &m, p);
                r.resize(h as usize, 0);
                mul[slot(a as u8, b as u8)] = encode(&r) as u8;
            }
        }
        let mut inv = [0u8; 16];
        for a in 1..q as u8 {
            inv[a as usize] = (1..q as u8).find(|&b| mul[slot(a, b)] == 1).expect("field");
        }

        // Smallest primitive element of GF(q)*.
        let order_of = |g: u8| {
            let (mut x, mut k) = (g, 1u32);
            while x != 1 {
                x = mul[slot(x, g)];
                k += 1;
            }
            k
        };
        let g = (1..q as u8)
            .find(|&g| order_of(g) == q - 1)
            .expect("cyclic group");
        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut log = [0u8; 16];
        let mut x = 1u8;
        for i in 0..2 * (q - 1) {
            if i < q - 1 {
                log[x as usize] = i as u8;
            }
            exp.push(x);
            x = mul[slot(x, g)];
        }

        BaseField {
            p: p as u8,
            h: h as u8,
            q: q as u8,
            modulus,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
        }
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn h(&self) -> u32 {
        self.h as u32
    }

    pub fn q(&self) -> u32 {
        self.q as u32
    }

    /// The defining monic polynomial over GF(p), low degree first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[slot(a, b)]
    }

    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add[slot(a, self.neg[b as usize])]
    }

    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[slot(a, b)]
    }

    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    /// Inverse of a value known to be nonzero.
    #[inline(always)]
    pub(crate) fn inv_nonzero(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn div(&self, a: u8, b: u8) -> Result<u8> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `g^i` for the fixed primitive element `g` of GF(q).
    pub fn exp(&self, i: u32) -> u8 {
        self.exp[(i % (self.q as u32 - 1)) as usize]
    }

    pub fn log(&self, a: u8) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a as usize] as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

/// Lexicographically least monic irreducible of degree `h` over GF(p),
/// ordering candidates by the integer value of their coefficient digits.
fn least_base_modulus(p: u32, h: u32) -> Vec<u8> {
    (0..p.pow(h))
        .map(|n| poly::monic_from_index(n, h as usize, p))
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
        .into_iter()
        .map(|c| c as u8)
        .collect()
}

fn cubic_has_root(base: &BaseField, f: &[u8; 4]) -> bool {
    base.elements().any(|x| {
        let x2 = base.mul(x, x);
        let x3 = base.mul(x2, x);
        let v = base.add(
            base.add(f[0], base.mul(f[1], x)),
            base.add(base.mul(f[2], x2), x3),
        );
        v == 0
    })
}

/// Every monic irreducible cubic over `base`, in increasing index order.
pub fn irreducible_cubics(base: &BaseField) -> Vec<[u8; 4]> {
    let q = base.q();
    (0..q * q * q)
        .map(|n| [(n % q) as u8, (n / q % q) as u8, (n / (q * q)) as u8, 1])
        .filter(|f| !cubic_has_root(base, f))
        .collect()
}

/// Arithmetic context for GF(p) ⊂ GF(q) ⊂ GF(q³).
///
/// Immutable once built. GF(q³) multiplication, powers, norm and Frobenius
/// all go through exp/log tables keyed by the smallest primitive element.
#[derive(Clone)]
pub struct FieldCtx {
    base: BaseField,
    cubic: [u8; 4],
    order: u32,
    generator: Elt,
    exp: Vec<u16>,
    log: Vec<u16>,
    norm: Vec<u8>,
    frob: [Vec<u16>; 2],
}

impl FieldCtx {
    /// Context for `q = p^h` with the least irreducible moduli.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        Self::with_moduli(p, h, None, None)
    }

    /// Context for a prime power `q`.
    pub fn for_q(q: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, h)
    }

    /// Builds the tower, optionally overriding either modulus. Overrides
    /// are full monic coefficient lists, low degree first.
    pub fn with_moduli(
        p: u32,
        h: u32,
        base_modulus: Option<&[u8]>,
        cubic_modulus: Option<&[u8]>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if h == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if q > MAX_Q as u64 {
            return Err(Error::CapacityExceeded { q, max: MAX_Q });
        }

        let modulus = match base_modulus {
            Some(m) => {
                if m.len() != h as usize + 1
                    || m[h as usize] != 1
                    || m.iter().any(|&c| c as u32 >= p)
                {
                    return Err(Error::MalformedModulus {
                        coeffs: m.to_vec(),
                        degree: h as usize,
                    });
                }
                let f: Vec<u32> = m.iter().map(|&c| c as u32).collect();
                if !poly::is_irreducible(&f, p) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => least_base_modulus(p, h),
        };
        let base = BaseField::build(p, h, modulus);

        let cubic = match cubic_modulus {
            Some(m) => {
                if m.len() != 4 || m[3] != 1 || m.iter().any(|&c| c as u32 >= base.q()) {
                    return Err(Error::MalformedModulus {
                        coeffs: m.to_vec(),
                        degree: 3,
                    });
                }
                let f = [m[0], m[1], m[2], m[3]];
                if cubic_has_root(&base, &f) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                f
            }
            None => irreducible_cubics(&base)[0],
        };

        Ok(Self::build(base, cubic))
    }

    fn build(base: BaseField, cubic: [u8; 4]) -> Self {
        let q = base.q();
        let order = q * q * q;
        let ctx_mul = |a: [u8; 3], b: [u8; 3]| -> [u8; 3] {
            let mut prod = [0u8; 5];
            for i in 0..3 {
                for j in 0..3 {
                    prod[i + j] = base.add(prod[i + j], base.mul(a[i], b[j]));
                }
            }
            // t³ = -(c0 + c1 t + c2 t²)
            for d in (3..5).rev() {
                let lead = prod[d];
                if lead != 0 {
                    for k in 0..3 {
                        prod[d - 3 + k] = base.sub(prod[d - 3 + k], base.mul(lead, cubic[k]));
                    }
                    prod[d] = 0;
                }
            }
            [prod[0], prod[1], prod[2]]
        };
        let coords = |x: u32| [(x % q) as u8, (x / q % q) as u8, (x / (q * q)) as u8];
        let index = |c: [u8; 3]| c[0] as u32 + c[1] as u32 * q + c[2] as u32 * q * q;

        let order_of = |g: u32| {
            let gc = coords(g);
            let (mut x, mut k) = (gc, 1u32);
            while index(x) != 1 {
                x = ctx_mul(x, gc);
                k += 1;
            }
            k
        };
        let generator = (2..order)
            .find(|&g| order_of(g) == order - 1)
            .expect("GF(q³)* is cyclic");

        let n = (order - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u16; order as usize];
        let mut x = [1u8, 0, 0];
        for i in 0..2 * n {
            let xi = index(x) as u16;
            if i < n {
                log[xi as usize] = i as u16;
            }
            exp.push(xi);
            x = ctx_mul(x, coords(generator));
        }

        let mut ctx = FieldCtx {
            base,
            cubic,
            order,
            generator: Elt(generator as u16),
            exp,
            log,
            norm: Vec::new(),
            frob: [Vec::new(), Vec::new()],
        };
        let norm_exp = (q * q + q + 1) as u64;
        ctx.norm = (0..order)
            .map(|i| ctx.pow(Elt(i as u16), norm_exp).0 as u8)
            .collect();
        ctx.frob = [
            (0..order)
                .map(|i| ctx.pow(Elt(i as u16), q as u64).0)
                .collect(),
            (0..order)
                .map(|i| ctx.pow(Elt(i as u16), (q * q) as u64).0)
                .collect(),
        ];
        ctx
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn h(&self) -> u32 {
        self.base.h()
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// Number of elements of GF(q³).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base_modulus(&self) -> &[u8] {
        self.base.modulus()
    }

    /// The monic cubic over GF(q) defining GF(q³), low degree first.
    pub fn cubic_modulus(&self) -> [u8; 4] {
        self.cubic
    }

    /// The primitive element keying the exp/log tables.
    pub fn generator(&self) -> Elt {
        self.generator
    }

    /// Checked conversion from an index.
    pub fn elt(&self, index: u32) -> Result<Elt> {
        if index >= self.order {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(Elt(index as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.order as u16).map(Elt)
    }

    pub fn nonzero_base_elements(&self) -> impl Iterator<Item = Elt> {
        (1..self.q() as u16).map(Elt)
    }

    /// True iff `x` lies in GF(q), i.e. `x^q = x`.
    #[inline]
    pub fn is_base(&self, x: Elt) -> bool {
        (x.0 as u32) < self.q()
    }

    #[inline]
    pub fn to_coords(&self, x: Elt) -> [u8; 3] {
        let q = self.q() as u16;
        [(x.0 % q) as u8, (x.0 / q % q) as u8, (x.0 / (q * q)) as u8]
    }

    #[inline]
    pub fn from_coords(&self, c: [u8; 3]) -> Elt {
        let q = self.q() as u16;
        Elt(c[0] as u16 + c[1] as u16 * q + c[2] as u16 * q * q)
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        if self.base.p == 2 {
            return Elt(a.0 ^ b.0);
        }
        let (x, y) = (self.to_coords(a), self.to_coords(b));
        self.from_coords([
            self.base.add(x[0], y[0]),
            self.base.add(x[1], y[1]),
            self.base.add(x[2], y[2]),
        ])
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        if self.base.p == 2 {
            return a;
        }
        let x = self.to_coords(a);
        self.from_coords([
            self.base.neg(x[0]),
            self.base.neg(x[1]),
            self.base.neg(x[2]),
        ])
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a.0 == 0 || b.0 == 0 {
            return Elt::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elt(self.exp[s])
    }

    pub fn inv(&self, a: Elt) -> Result<Elt> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = (self.order - 1) as usize;
        Ok(Elt(self.exp[n - self.log[a.0 as usize] as usize]))
    }

    pub fn div(&self, a: Elt, b: Elt) -> Result<Elt> {
        if b.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_nonzero(a, b))
    }

    /// `a / b` for `b` known to be nonzero.
    #[inline]
    pub(crate) fn div_nonzero(&self, a: Elt, b: Elt) -> Elt {
        debug_assert!(b.0 != 0);
        if a.0 == 0 {
            return Elt::ZERO;
        }
        let n = (self.order - 1) as usize;
        Elt(self.exp[self.log[a.0 as usize] as usize + n - self.log[b.0 as usize] as usize])
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if e == 0 {
            return Elt::ONE;
        }
        if a.0 == 0 {
            return Elt::ZERO;
        }
        let n = (self.order - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Elt(self.exp[k as usize])
    }

    /// `g^i` for the context's primitive element `g`.
    pub fn exp(&self, i: u64) -> Elt {
        Elt(self.exp[(i % (self.order as u64 - 1)) as usize])
    }

    pub fn log(&self, a: Elt) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a.0 as usize] as u32)
    }

    /// The norm `x^(q²+q+1)` from GF(q³) onto GF(q).
    #[inline]
    pub fn norm(&self, x: Elt) -> Elt {
        Elt(self.norm[x.0 as usize] as u16)
    }

    /// `x^(q^i)`; `i` is taken mod 3.
    #[inline]
    pub fn frobenius(&self, x: Elt, i: u32) -> Elt {
        match i % 3 {
            0 => x,
            k => Elt(self.frob[k as usize - 1][x.0 as usize]),
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p())
            .field("h", &self.h())
            .field("base_modulus", &self.base_modulus())
            .field("cubic_modulus", &self.cubic)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

/// Exhaustive consistency checks of a context's tables: inverses, norm
/// multiplicativity and fibre sizes, and the order of Frobenius.
pub fn self_checks(ctx: &FieldCtx) -> Vec<crate::check::Check> {
    use crate::check::Check;
    let q = ctx.q();
    let base = ctx.base();
    let cubic = ctx.cubic_modulus();
    let inverses = ctx
        .elements()
        .skip(1)
        .all(|x| ctx.inv(x).is_ok_and(|y| ctx.mul(x, y) == Elt::ONE));
    let multiplicative = ctx.elements().all(|x| {
        ctx.elements()
            .all(|y| ctx.norm(ctx.mul(x, y)) == ctx.mul(ctx.norm(x), ctx.norm(y)))
    });
    let mut fibres = vec![0u64; q as usize];
    let mut lands_in_base = true;
    for x in ctx.elements().skip(1) {
        let n = ctx.norm(x);
        lands_in_base &= ctx.is_base(n) && !n.is_zero();
        if lands_in_base {
            fibres[n.index() as usize] += 1;
        }
    }
    let hyper = (q * q + q + 1) as u64;
    let frobenius = ctx.elements().all(|x| {
        let f1 = ctx.frobenius(x, 1);
        ctx.frobenius(ctx.frobenius(f1, 1), 1) == x && (f1 == x) == ctx.is_base(x)
    });
    vec![
        Check::holds("field.cubic_irreducible", !cubic_has_root(base, &cubic)),
        Check::holds("field.inverses", inverses),
        Check::holds("field.norm_multiplicative", multiplicative),
        Check::holds("field.norm_in_base", lands_in_base),
        Check::holds("field.norm_fibres", fibres[1..].iter().all(|&n| n == hyper)),
        Check::holds("field.frobenius", frobenius),
    ]
}
