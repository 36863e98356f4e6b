//! Double description: incremental insertion of homogeneous inequalities `aᵀy <= 0` with
//! combinatorial adjacency for ray pairing.

use std::collections::HashSet;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{axpy, dot, neg, primitive, primitive_line, RMat, RVec, Rat};

/// Hard ceiling on intermediate ray counts; desk-scale inputs never come close.
const MAX_RAYS: usize = 20_000;

/// Generators of a polyhedral cone: `cone(rays) + span(lineality)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConeGens {
    pub rays: RMat,
    pub lineality: RMat,
}

#[derive(Clone)]
struct Ray {
    v: RVec,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Generators of `{y ∈ ℝᵈ : row·y <= 0 for every row}`.
pub fn cone_generators(rows: &[RVec], d: usize) -> Result<ConeGens> {
    let words = rows.len().div_ceil(64).max(1);
    let mut lineality: RMat = (0..d).map(|i| crate::rat::unit(d, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        if a.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "constraint row has length {}, expected {d}",
                a.len()
            )));
        }
        if let Some(li) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let l = lineality.remove(li);
            let al = dot(a, &l);
            for other in lineality.iter_mut() {
                let f = -(dot(a, other) / &al);
                if !f.is_zero() {
                    *other = primitive(&axpy(other, &f, &l));
                }
            }
            for r in rays.iter_mut() {
                let f = -(dot(a, &r.v) / &al);
                if !f.is_zero() {
                    r.v = primitive(&axpy(&r.v, &f, &l));
                }
                set_bit(&mut r.zeros, k);
            }
            let mut fresh = vec![0u64; words];
            for j in 0..k {
                set_bit(&mut fresh, j);
            }
            let v = if al.is_positive() { neg(&l) } else { l };
            rays.push(Ray {
                v: primitive(&v),
                zeros: fresh,
            });
            continue;
        }

        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    set_bit(&mut r.zeros, k);
                }
            }
            continue;
        }
        let negs: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let need = d.saturating_sub(lineality.len()).saturating_sub(2);
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &negs {
                let common = and(&rays[p].zeros, &rays[n].zeros);
                if popcount(&common) < need {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == n || !subset(&common, &rays[r].zeros));
                if !adjacent {
                    continue;
                }
                // (a·p) n - (a·n) p lies on the hyperplane and is a nonnegative combination
                let v = axpy(
                    &crate::rat::scale(&vals[p], &rays[n].v),
                    &(-vals[n].clone()),
                    &rays[p].v,
                );
                let mut zeros = common;
                set_bit(&mut zeros, k);
                next.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                set_bit(&mut r.zeros, k);
                kept.push(r);
            } else if vals[i].is_negative() {
                kept.push(r);
            }
        }
        kept.extend(next);
        if kept.len() > MAX_RAYS {
            return Err(Error::SizeCap {
                what: "intermediate rays",
                got: kept.len(),
                cap: MAX_RAYS,
            });
        }
        rays = kept;
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rays {
        if r.v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if seen.insert(r.v.clone()) {
            out.push(r.v);
        }
    }
    Ok(ConeGens {
        rays: out,
        lineality: lineality.iter().map(|l| primitive_line(l)).collect(),
    })
}
