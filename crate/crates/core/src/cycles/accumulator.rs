//! Incremental row echelon form over `Q` or `F_p` for sparse integer rows.
//!
//! Rows are kept with distinct leading columns. Over `Q` the elimination is
//! fraction-free: `v <- a*v - b*row` with the cofactors of the two leading
//! entries, after which `v` is divided by the gcd of its entries. No
//! rational or floating-point arithmetic is involved.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CycleVector, FieldSpec};

type QRow = Vec<(u32, BigInt)>;
type PRow = Vec<(u32, u64)>;

#[derive(Clone, Debug)]
enum Rows {
    Rational(HashMap<u32, QRow>),
    Prime { p: u64, rows: HashMap<u32, PRow> },
}

/// Span of pushed integer vectors over a field.
#[derive(Clone, Debug)]
pub struct CycleAccumulator {
    field: FieldSpec,
    rows: Rows,
    saturation_cap: usize,
}

impl CycleAccumulator {
    /// `saturation_cap` bounds the rank (the cyclomatic number for cycle spans).
    pub fn new(field: FieldSpec, saturation_cap: usize) -> Self {
        let rows = match field {
            FieldSpec::Rationals => Rows::Rational(HashMap::new()),
            FieldSpec::Prime(p) => Rows::Prime { p, rows: HashMap::new() },
        };
        CycleAccumulator { field, rows, saturation_cap }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Rational(rows) => rows.len(),
            Rows::Prime { rows, .. } => rows.len(),
        }
    }

    pub fn saturation_cap(&self) -> usize {
        self.saturation_cap
    }

    pub fn is_saturated(&self) -> bool {
        self.rank() >= self.saturation_cap
    }

    pub fn push_cycle(&mut self, cycle: &CycleVector) -> bool {
        self.push(cycle.entries.iter().map(|&(e, c)| (e as u32, c as i64)))
    }

    /// Adds a vector given as `(column, coefficient)` pairs (any order,
    /// repeated columns summed). Returns whether the rank grew.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (u32, i64)>) -> bool {
        let mut merged: Vec<(u32, i64)> = entries.into_iter().collect();
        merged.sort_unstable_by_key(|&(c, _)| c);
        let mut dense: Vec<(u32, i64)> = Vec::with_capacity(merged.len());
        for (c, v) in merged {
            match dense.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => dense.push((c, v)),
            }
        }
        let grew = match &mut self.rows {
            Rows::Rational(rows) => {
                let v: QRow = dense.into_iter().filter(|&(_, x)| x != 0).map(|(c, x)| (c, BigInt::from(x))).collect();
                insert_rational(rows, v)
            }
            Rows::Prime { p, rows } => {
                let p = *p;
                let v: PRow = dense
                    .into_iter()
                    .map(|(c, x)| (c, x.rem_euclid(p as i64) as u64))
                    .filter(|&(_, x)| x != 0)
                    .collect();
                insert_prime(rows, v, p)
            }
        };
        debug_assert!(self.rank() <= self.saturation_cap);
        grew
    }
}

fn insert_rational(rows: &mut HashMap<u32, QRow>, mut v: QRow) -> bool {
    loop {
        let Some((lead, lead_coef)) = v.first().cloned() else {
            return false;
        };
        let Some(row) = rows.get(&lead) else {
            make_primitive(&mut v);
            rows.insert(lead, v);
            return true;
        };
        let pivot = &row[0].1;
        let g = pivot.gcd(&lead_coef);
        let scale_v = pivot / &g;
        let scale_row = &lead_coef / &g;
        v = combine_rational(&v, &scale_v, row, &scale_row);
        make_primitive(&mut v);
    }
}

/// `a*x - b*y` for sorted sparse rows, zeros dropped.
fn combine_rational(x: &QRow, a: &BigInt, y: &QRow, b: &BigInt) -> QRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, val) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, a * vx)
            }
            (Some((cx, _)), Some((cy, vy))) if cy < cx => {
                j += 1;
                (*cy, -(b * vy))
            }
            (Some((cx, vx)), Some((_, vy))) => {
                i += 1;
                j += 1;
                (*cx, a * vx - b * vy)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, a * vx)
            }
            (None, Some((cy, vy))) => {
                j += 1;
                (*cy, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn make_primitive(v: &mut QRow) {
    let mut content = BigInt::zero();
    for (_, x) in v.iter() {
        content = content.gcd(x);
        if content.is_one() {
            break;
        }
    }
    if v.first().is_some_and(|(_, x)| x.is_negative()) {
        content = -content;
    }
    if !content.is_zero() && !content.is_one() {
        for (_, x) in v.iter_mut() {
            *x = &*x / &content;
        }
    }
}

fn insert_prime(rows: &mut HashMap<u32, PRow>, mut v: PRow, p: u64) -> bool {
    loop {
        let Some(&(lead, lead_coef)) = v.first() else {
            return false;
        };
        let Some(row) = rows.get(&lead) else {
            let inv = mod_inverse(lead_coef, p);
            for (_, x) in v.iter_mut() {
                *x = *x * inv % p;
            }
            rows.insert(lead, v);
            return true;
        };
        // Rows are monic, so v - lead_coef * row clears the leading column.
        v = combine_prime(&v, row, lead_coef, p);
    }
}

fn combine_prime(x: &PRow, y: &PRow, b: u64, p: u64) -> PRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let neg = |v: u64| (p - v * b % p) % p;
    while i < x.len() || j < y.len() {
        let (col, val) = match (x.get(i), y.get(j)) {
            (Some(&(cx, vx)), Some(&(cy, _))) if cx < cy => {
                i += 1;
                (cx, vx)
            }
            (Some(&(cx, _)), Some(&(cy, vy))) if cy < cx => {
                j += 1;
                (cy, neg(vy))
            }
            (Some(&(cx, vx)), Some(&(_, vy))) => {
                i += 1;
                j += 1;
                (cx, (vx + neg(vy)) % p)
            }
            (Some(&(cx, vx)), None) => {
                i += 1;
                (cx, vx)
            }
            (None, Some(&(cy, vy))) => {
                j += 1;
                (cy, neg(vy))
            }
            (None, None) => unreachable!(),
        };
        if val != 0 {
            out.push((col, val));
        }
    }
    out
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2).
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    result
}
