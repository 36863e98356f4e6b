use num::{Signed, Zero};

use crate::caps::check_rows;
use crate::error::{Error, Result};
use crate::rat::{axpy, scale, Rat};

use super::HPolyhedron;

/// Rows allowed to accumulate during elimination before giving up.
const FM_ROW_LIMIT: usize = 4096;

/// Coordinate projection by Fourier–Motzkin elimination. `coords` are 0-based and the output
/// columns follow their order.
pub fn project_fm(p: &HPolyhedron, coords: &[usize]) -> Result<HPolyhedron> {
    let n = p.dim();
    if coords.is_empty() {
        return Err(Error::Malformed("projection needs at least one coordinate".into()));
    }
    let mut sorted = coords.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != coords.len() || *sorted.last().unwrap() >= n {
        return Err(Error::Malformed(format!(
            "projection coordinates {coords:?} must be distinct and below {n}"
        )));
    }
    check_rows("constraint rows", p.len())?;

    // each working row carries its coefficient vector followed by the right-hand side
    let mut rows: Vec<Vec<Rat>> = p
        .rows()
        .iter()
        .zip(p.rhs())
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect();

    for k in (0..n).filter(|k| !coords.contains(k)) {
        let (mut pos, mut negs, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r[k].is_positive() {
                pos.push(r);
            } else if r[k].is_negative() {
                negs.push(r);
            } else {
                rest.push(r);
            }
        }
        for pr in &pos {
            for nr in &negs {
                // (-nr_k) * pr + pr_k * nr cancels coordinate k with nonnegative weights
                let combo = axpy(&scale(&(-nr[k].clone()), pr), &pr[k], nr);
                rest.push(combo);
            }
        }
        rows = HPolyhedron::from_augmented(n, rest).dedup_augmented();
        if rows.len() > FM_ROW_LIMIT {
            return Err(Error::SizeCap {
                what: "Fourier-Motzkin rows",
                got: rows.len(),
                cap: FM_ROW_LIMIT,
            });
        }
    }

    let mut out = HPolyhedron::whole(coords.len());
    for r in rows {
        let a: Vec<Rat> = coords.iter().map(|&c| r[c].clone()).collect();
        if a.iter().all(|x| x.is_zero()) && !r[n].is_negative() {
            continue;
        }
        out.push(a, r[n].clone());
    }
    Ok(out.dedup())
}

impl HPolyhedron {
    fn from_augmented(n: usize, rows: Vec<Vec<Rat>>) -> HPolyhedron {
        let mut h = HPolyhedron::whole(n);
        for mut r in rows {
            let b = r.pop().unwrap();
            h.push(r, b);
        }
        h
    }

    fn dedup_augmented(&self) -> Vec<Vec<Rat>> {
        let d = self.dedup();
        d.rows()
            .iter()
            .zip(d.rhs())
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rmat, rvec};

    #[test]
    fn orthant_to_first_coordinate() {
        let p = project_fm(&HPolyhedron::orthant(2), &[0]).unwrap();
        assert_eq!(p.rows(), &[rvec(&[-1])]);
        assert_eq!(p.rhs(), &[rat(0)]);
    }

    #[test]
    fn simplex_to_second_coordinate() {
        let h = HPolyhedron::new(2, rmat(&[&[-1, 0], &[0, -1], &[1, 1]]), rvec(&[0, 0, 1])).unwrap();
        let p = project_fm(&h, &[1]).unwrap();
        for (x, inside) in [(0, true), (1, true), (-1, false), (2, false)] {
            assert_eq!(p.contains(&rvec(&[x])), inside);
        }
        assert!(p.contains(&[crate::rat::ratio(1, 2)]));
    }

    #[test]
    fn wedge_projects_to_line() {
        let h = HPolyhedron::new(2, rmat(&[&[1, -1], &[-1, -1]]), rvec(&[0, 0])).unwrap();
        let p = project_fm(&h, &[0]).unwrap();
        assert!(p.is_empty_system());
    }

    #[test]
    fn rejects_bad_coords() {
        assert!(project_fm(&HPolyhedron::orthant(2), &[]).is_err());
        assert!(project_fm(&HPolyhedron::orthant(2), &[2]).is_err());
    }
}
