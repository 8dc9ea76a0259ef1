//! Points and planes of PG(5,q).
//!
//! A plane is stored as the reduced row-echelon form of any basis, which is
//! the unique canonical representative of its row space. Enumeration walks
//! the 20 pivot patterns and fills the free entries with an odometer, so
//! every plane is produced exactly once without a dedup set.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{BaseField, FieldCtx};

/// A vector of GF(q)⁶, entries given by base-field index.
pub type Row = [u8; 6];

/// A point of PG(5,q): a nonzero vector whose first nonzero entry is 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint([u8; 6]);

impl ProjPoint {
    /// Normalizes `coords` so its first nonzero entry is 1.
    pub fn new(ctx: &FieldCtx, coords: Row) -> Result<Self> {
        let base = ctx.base();
        let lead = coords
            .iter()
            .copied()
            .find(|&c| c != 0)
            .ok_or(Error::ZeroVector)?;
        Ok(ProjPoint(scale(base, coords, base.inv_nonzero(lead))))
    }

    /// Wraps coordinates that are already normalized.
    pub(crate) fn from_normalized(coords: Row) -> Self {
        debug_assert!(coords.iter().find(|&&c| c != 0) == Some(&1));
        ProjPoint(coords)
    }

    pub fn coords(&self) -> Row {
        self.0
    }

    /// The coordinates read as a base-`q` integer, first entry most
    /// significant. Injective on points; used for dense bitmaps.
    pub fn raw_index(&self, q: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &c| acc * q as usize + c as usize)
    }
}

fn scale(base: &BaseField, mut v: Row, k: u8) -> Row {
    if k != 1 {
        for c in v.iter_mut() {
            *c = base.mul(*c, k);
        }
    }
    v
}

/// Fixed-width serialization of a plane's RREF basis: 18 element indices,
/// row-major, one byte each.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaneKey(pub [u8; 18]);

impl fmt::Display for PlaneKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl FromStr for PlaneKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 36 || !s.is_ascii() {
            return Err(Error::MalformedKey(s.to_string()));
        }
        let mut out = [0u8; 18];
        for (i, b) in out.iter_mut().enumerate() {
            *b = u8::from_str_radix(&s[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::MalformedKey(s.to_string()))?;
        }
        Ok(PlaneKey(out))
    }
}

/// A plane of PG(5,q) held in reduced row-echelon form.
///
/// Equality, hashing and ordering all follow the canonical basis, so they
/// agree with equality of the underlying subspaces.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plane {
    rows: [Row; 3],
}

impl Plane {
    /// Canonical plane spanned by three vectors.
    pub fn from_rows(ctx: &FieldCtx, mut rows: [Row; 3]) -> Result<Self> {
        match rref(ctx.base(), &mut rows) {
            3 => Ok(Plane { rows }),
            r => Err(Error::RankDeficient(r)),
        }
    }

    /// Rebuilds a plane from its key, rejecting keys that are not the RREF of
    /// a rank-3 matrix over the context's field.
    pub fn from_key(ctx: &FieldCtx, key: &PlaneKey) -> Result<Self> {
        let q = ctx.q() as u8;
        if key.0.iter().any(|&c| c >= q) {
            return Err(Error::MalformedKey(key.to_string()));
        }
        let mut rows = [[0u8; 6]; 3];
        for (r, row) in rows.iter_mut().enumerate() {
            row.copy_from_slice(&key.0[6 * r..6 * r + 6]);
        }
        let plane = Plane::from_rows(ctx, rows)?;
        if plane.rows != rows {
            return Err(Error::MalformedKey(key.to_string()));
        }
        Ok(plane)
    }

    pub fn rows(&self) -> &[Row; 3] {
        &self.rows
    }

    pub fn key(&self) -> PlaneKey {
        let mut out = [0u8; 18];
        for (r, row) in self.rows.iter().enumerate() {
            out[6 * r..6 * r + 6].copy_from_slice(row);
        }
        PlaneKey(out)
    }

    pub fn pivots(&self) -> [usize; 3] {
        self.rows
            .map(|row| row.iter().position(|&c| c != 0).expect("rank 3"))
    }

    /// The q²+q+1 points of the plane. Coefficient vectors are taken with a
    /// leading 1, which the RREF turns into normalized points directly.
    pub fn points<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = ProjPoint> + 'a {
        let base = ctx.base();
        let q = ctx.q() as u8;
        let [r0, r1, r2] = self.rows;
        let leading_first = (0..q)
            .flat_map(move |a| (0..q).map(move |b| combine(base, &[(1, &r0), (a, &r1), (b, &r2)])));
        let leading_second = (0..q).map(move |b| combine(base, &[(1, &r1), (b, &r2)]));
        leading_first
            .chain(leading_second)
            .chain(std::iter::once(r2))
            .map(ProjPoint::from_normalized)
    }

    /// True iff `pt` lies on the plane.
    pub fn contains(&self, ctx: &FieldCtx, pt: &ProjPoint) -> bool {
        let base = ctx.base();
        let mut v = pt.0;
        for (row, col) in self.rows.iter().zip(self.pivots()) {
            let f = v[col];
            if f != 0 {
                for c in 0..6 {
                    v[c] = base.sub(v[c], base.mul(f, row[c]));
                }
            }
        }
        v.iter().all(|&c| c == 0)
    }
}

fn combine(base: &BaseField, terms: &[(u8, &Row)]) -> Row {
    let mut out = [0u8; 6];
    for &(k, row) in terms {
        if k != 0 {
            for c in 0..6 {
                out[c] = base.add(out[c], base.mul(k, row[c]));
            }
        }
    }
    out
}

/// Brings `rows` to reduced row-echelon form in place and returns the rank.
/// Nonzero rows end up first.
pub fn rref(base: &BaseField, rows: &mut [Row]) -> usize {
    let mut rank = 0;
    for col in 0..6 {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = base.inv_nonzero(rows[rank][col]);
        rows[rank] = scale(base, rows[rank], inv);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if r != rank && f != 0 {
                for c in col..6 {
                    row[c] = base.sub(row[c], base.mul(f, pivot_row[c]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a set of vectors (forward elimination only).
pub fn rank(base: &BaseField, rows: &mut [Row]) -> usize {
    let mut rank = 0;
    for col in 0..6 {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = base.inv_nonzero(rows[rank][col]);
        let pivot_row = rows[rank];
        for row in rows[rank + 1..].iter_mut() {
            let f = base.mul(row[col], inv);
            if f != 0 {
                for c in col..6 {
                    row[c] = base.sub(row[c], base.mul(f, pivot_row[c]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The plane spanned by three points.
pub fn plane_from_points(
    ctx: &FieldCtx,
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> Result<Plane> {
    Plane::from_rows(ctx, [p1.0, p2.0, p3.0])
}

pub fn incidence(ctx: &FieldCtx, pt: &ProjPoint, pl: &Plane) -> bool {
    pl.contains(ctx, pt)
}

/// Projective dimension of `a ∩ b`: -1 (disjoint), 0 (point), 1 (line) or
/// 2 (equal).
pub fn meet_dim(ctx: &FieldCtx, a: &Plane, b: &Plane) -> i32 {
    let base = ctx.base();
    // Clear a's pivot columns from b's rows; what survives spans (a + b) / a.
    let mut reduced = b.rows;
    for (row, col) in a.rows.iter().zip(a.pivots()) {
        for v in reduced.iter_mut() {
            let f = v[col];
            if f != 0 {
                for c in 0..6 {
                    v[c] = base.sub(v[c], base.mul(f, row[c]));
                }
            }
        }
    }
    2 - rank(base, &mut reduced) as i32
}

/// Number of points of PG(5,q): (q⁶-1)/(q-1).
pub fn point_count(q: u64) -> u64 {
    (0..6).map(|i| q.pow(i)).sum()
}

/// Number of planes of PG(5,q): (q³+1)(q²+1)(q⁴+q³+q²+q+1).
pub fn plane_count(q: u64) -> u64 {
    (q.pow(3) + 1) * (q.pow(2) + 1) * (q.pow(4) + q.pow(3) + q.pow(2) + q + 1)
}

/// All points of PG(5,q), ordered by the position of the leading 1 and then
/// lexicographically.
pub fn points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> {
    let q = ctx.q() as u64;
    (0..6usize).flat_map(move |lead| {
        let free = 5 - lead;
        (0..q.pow(free as u32)).map(move |mut n| {
            let mut v = [0u8; 6];
            v[lead] = 1;
            for c in (lead + 1..6).rev() {
                v[c] = (n % q) as u8;
                n /= q;
            }
            ProjPoint(v)
        })
    })
}

/// The 20 ways to choose 3 pivot columns out of 6, lexicographic.
pub const PIVOT_PATTERNS: [[usize; 3]; 20] = {
    let mut out = [[0usize; 3]; 20];
    let mut k = 0;
    let mut a = 0;
    while a < 6 {
        let mut b = a + 1;
        while b < 6 {
            let mut c = b + 1;
            while c < 6 {
                out[k] = [a, b, c];
                k += 1;
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// Free (row, column) positions of a pivot pattern in row-major order.
fn free_positions(pattern: [usize; 3]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pattern.iter().enumerate() {
        for c in p + 1..6 {
            if !pattern.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

/// Number of planes whose RREF has the given pivot pattern.
pub fn pattern_size(q: u32, pattern: usize) -> u64 {
    (q as u64).pow(free_positions(PIVOT_PATTERNS[pattern]).len() as u32)
}

/// A contiguous run of the deterministic plane enumeration: planes
/// `start..end` (odometer values) of one pivot pattern.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PlaneChunk {
    pub pattern: usize,
    pub start: u64,
    pub end: u64,
}

impl PlaneChunk {
    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn planes(self, ctx: &FieldCtx) -> PatternIter {
        PatternIter::new(ctx.q(), self)
    }
}

/// Splits the full enumeration into chunks of at most `max_len` planes, in
/// enumeration order.
pub fn plane_chunks(q: u32, max_len: u64) -> Vec<PlaneChunk> {
    assert!(max_len > 0);
    let mut out = Vec::new();
    for pattern in 0..PIVOT_PATTERNS.len() {
        let size = pattern_size(q, pattern);
        let mut start = 0;
        while start < size {
            let end = (start + max_len).min(size);
            out.push(PlaneChunk {
                pattern,
                start,
                end,
            });
            start = end;
        }
    }
    out
}

/// Every plane of PG(5,q) exactly once: pivot patterns in lexicographic
/// order, then the free entries as an odometer whose first (row-major) free
/// entry is the fastest digit.
pub fn enumerate_planes(ctx: &FieldCtx) -> impl Iterator<Item = Plane> + '_ {
    plane_chunks(ctx.q(), u64::MAX)
        .into_iter()
        .flat_map(move |chunk| chunk.planes(ctx))
}

/// Iterator over one [`PlaneChunk`].
pub struct PatternIter {
    q: u8,
    free: Vec<(usize, usize)>,
    rows: [Row; 3],
    remaining: u64,
}

impl PatternIter {
    fn new(q: u32, chunk: PlaneChunk) -> Self {
        let pattern = PIVOT_PATTERNS[chunk.pattern];
        let free = free_positions(pattern);
        let mut rows = [[0u8; 6]; 3];
        for (r, &p) in pattern.iter().enumerate() {
            rows[r][p] = 1;
        }
        let mut n = chunk.start;
        for &(r, c) in &free {
            rows[r][c] = (n % q as u64) as u8;
            n /= q as u64;
        }
        PatternIter {
            q: q as u8,
            free,
            rows,
            remaining: chunk.len(),
        }
    }
}

impl Iterator for PatternIter {
    type Item = Plane;

    fn next(&mut self) -> Option<Plane> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = Plane { rows: self.rows };
        for &(r, c) in &self.free {
            self.rows[r][c] += 1;
            if self.rows[r][c] < self.q {
                break;
            }
            self.rows[r][c] = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}
