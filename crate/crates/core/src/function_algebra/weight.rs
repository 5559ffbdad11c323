//! Geometric weights `w(s) ∝ prod q_i^{|s_i|}` on `S`, truncated to a box.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{Element, Family, SemigroupDesc};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

const MAX_RETAINED: usize = 4_000_000;

/// A probability weight on `S` together with the finite set of elements it
/// is evaluated on.
///
/// For `Z_+^n` and numerical monoids the normalizer is exact, so retained
/// weights are the true weights and `tail_bound` bounds the discarded mass.
/// For lattice cones the retained weights are renormalized to total mass 1
/// and `tail_bound` bounds the relative mass outside the box.
#[derive(Clone, Debug, Serialize)]
pub struct Weight {
    q: Vec<f64>,
    trunc_degree: i64,
    tail_bound: f64,
    #[serde(skip)]
    retained: Arc<Vec<(Element, f64)>>,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.trunc_degree == other.trunc_degree
    }
}

impl Weight {
    pub fn geometric(sg: &SemigroupDesc, q: Vec<f64>) -> Result<Self> {
        Self::geometric_with_tol(sg, q, DEFAULT_TAIL_TOL)
    }

    /// Geometric weight with truncation chosen so the discarded mass is at
    /// most `tol`.
    pub fn geometric_with_tol(sg: &SemigroupDesc, q: Vec<f64>, tol: f64) -> Result<Self> {
        if q.len() != sg.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: sg.ambient_dim(),
                got: q.len(),
            });
        }
        if let Some(x) = q.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::InvalidWeight(format!("ratio {x} is not in (0,1)")));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidWeight(format!("tail tolerance {tol} is not in (0,1)")));
        }
        match sg.family() {
            Family::PolyCube => Self::polycube(sg, q, tol),
            Family::Numerical => Self::numerical(sg, q, tol),
            Family::LatticeCone => Self::lattice(sg, q, tol),
        }
    }

    fn polycube(sg: &SemigroupDesc, q: Vec<f64>, tol: f64) -> Result<Self> {
        // Mass outside [0,N]^d is 1 - prod(1 - q_i^{N+1}) <= sum q_i^{N+1}.
        let tail = |n: i64| q.iter().map(|x| x.powi((n + 1) as i32)).sum::<f64>();
        let n = smallest_degree(|n| tail(n) <= tol)?;
        let d = sg.ambient_dim();
        check_size((n + 1) as f64, d)?;
        let mut retained = Vec::new();
        for_each_in_box(0, n, d, |v| {
            let w: f64 = v
                .iter()
                .zip(&q)
                .map(|(&s, &x)| (1.0 - x) * x.powi(s as i32))
                .product();
            retained.push((Element(v.to_vec()), w));
        });
        Ok(Weight {
            tail_bound: tail(n),
            q,
            trunc_degree: n,
            retained: Arc::new(retained),
        })
    }

    fn numerical(sg: &SemigroupDesc, q: Vec<f64>, tol: f64) -> Result<Self> {
        let x = q[0];
        let g = sg.gcd_scale();
        let members: Vec<i64> = {
            // Apery set of the normalized monoid, recovered by membership.
            let m = sg.generators()[0][0] / g;
            (0..m)
                .map(|r| {
                    let mut u = r;
                    while !sg.contains(&[u * g]).unwrap_or(false) {
                        u += m;
                    }
                    u
                })
                .collect()
        };
        let m = sg.generators()[0][0] as f64;
        let z: f64 = members
            .iter()
            .map(|&u| x.powf((u * g) as f64))
            .sum::<f64>()
            / (1.0 - x.powf(m));
        let tail = |n: i64| x.powi((n + 1) as i32) / ((1.0 - x) * z);
        let n = smallest_degree(|n| tail(n) <= tol)?;
        check_size((n + 1) as f64, 1)?;
        let retained = (0..=n)
            .filter(|&s| sg.contains(&[s]).unwrap_or(false))
            .map(|s| (Element(vec![s]), x.powi(s as i32) / z))
            .collect();
        Ok(Weight {
            tail_bound: tail(n),
            q,
            trunc_degree: n,
            retained: Arc::new(retained),
        })
    }

    fn lattice(sg: &SemigroupDesc, q: Vec<f64>, tol: f64) -> Result<Self> {
        // Over all of Z^d the unnormalized mass is prod (1+q)/(1-q); inside
        // the box [-N,N]^d it is prod (1+q-2q^{N+1})/(1-q).
        let outside = |n: i64| {
            let full: f64 = q.iter().map(|x| (1.0 + x) / (1.0 - x)).product();
            let inside: f64 = q
                .iter()
                .map(|x| (1.0 + x - 2.0 * x.powi((n + 1) as i32)) / (1.0 - x))
                .product();
            (full - inside).max(0.0)
        };
        // The identity alone has mass 1, so outside/1 bounds the relative tail.
        let n = smallest_degree(|n| outside(n) <= tol)?;
        let d = sg.ambient_dim();
        check_size((2 * n + 1) as f64, d)?;
        let mut raw = Vec::new();
        let mut err = None;
        for_each_in_box(-n, n, d, |v| match sg.contains(v) {
            Ok(true) => {
                let w: f64 = v.iter().zip(&q).map(|(&s, &x)| x.powi(s.abs() as i32)).product();
                raw.push((Element(v.to_vec()), w));
            }
            Ok(false) => {}
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e);
        }
        let z: f64 = raw.iter().map(|(_, w)| w).sum();
        let retained = raw.into_iter().map(|(s, w)| (s, w / z)).collect();
        Ok(Weight {
            tail_bound: outside(n) / z,
            q,
            trunc_degree: n,
            retained: Arc::new(retained),
        })
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Largest `|s_i|` among retained elements.
    pub fn trunc_degree(&self) -> i64 {
        self.trunc_degree
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Retained `(s, w(s))` pairs, sorted by `s`.
    pub fn retained(&self) -> &[(Element, f64)] {
        &self.retained
    }

    pub fn retained_mass(&self) -> f64 {
        self.retained.iter().map(|(_, w)| w).sum()
    }

    /// `E_w[s]` over the retained elements.
    pub fn mean(&self) -> Vec<f64> {
        let d = self.q.len();
        let mut m = vec![0.0; d];
        for (s, w) in self.retained.iter() {
            for (mi, &si) in m.iter_mut().zip(s.coords()) {
                *mi += w * si as f64;
            }
        }
        m
    }
}

fn smallest_degree(ok: impl Fn(i64) -> bool) -> Result<i64> {
    (0..1_000_000)
        .find(|&n| ok(n))
        .ok_or_else(|| Error::InvalidWeight("no truncation degree meets the tail tolerance".into()))
}

fn check_size(side: f64, d: usize) -> Result<()> {
    if side.powi(d as i32) > MAX_RETAINED as f64 {
        return Err(Error::InvalidWeight(format!(
            "truncation box of side {side} in dimension {d} is too large; use smaller ratios"
        )));
    }
    Ok(())
}

fn for_each_in_box(lo: i64, hi: i64, d: usize, mut f: impl FnMut(&[i64])) {
    let mut v = vec![lo; d];
    loop {
        f(&v);
        let mut c = d;
        loop {
            if c == 0 {
                return;
            }
            c -= 1;
            v[c] += 1;
            if v[c] <= hi {
                break;
            }
            v[c] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polycube_mass_and_tail() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let w = Weight::geometric(&sg, vec![0.5, 0.5]).unwrap();
        assert!(w.tail_bound() <= 1e-12);
        let mass = w.retained_mass();
        assert!(mass <= 1.0 + 1e-15 && mass + w.tail_bound() >= 1.0 - 1e-15);
        assert!(w.retained().iter().all(|(_, x)| *x > 0.0));
        let m = w.mean();
        assert!((m[0] - 1.0).abs() < 1e-10 && (m[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn numerical_normalizer_is_exact() {
        // S = <2,3> = Z_+ \ {1}: Z = 1/(1-q) - q.
        let sg = SemigroupDesc::numerical(&[2, 3]).unwrap();
        let q = 0.5;
        let w = Weight::geometric(&sg, vec![q]).unwrap();
        let z = 1.0 / (1.0 - q) - q;
        assert!((w.retained()[0].1 - 1.0 / z).abs() < 1e-15);
        assert!(w.retained().iter().all(|(s, _)| s.0[0] != 1));
        let mass = w.retained_mass();
        assert!(mass <= 1.0 + 1e-15 && mass + w.tail_bound() >= 1.0 - 1e-15);
    }

    #[test]
    fn numerical_with_common_factor() {
        let sg = SemigroupDesc::numerical(&[4, 6]).unwrap();
        let w = Weight::geometric(&sg, vec![0.8]).unwrap();
        assert!(w.retained().iter().all(|(s, _)| s.0[0] % 2 == 0 && s.0[0] != 2));
        let mass = w.retained_mass();
        assert!(mass <= 1.0 + 1e-15 && mass + w.tail_bound() >= 1.0 - 1e-15);
    }

    #[test]
    fn lattice_cone_is_renormalized() {
        let sg = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![1, 1], vec![1, -1]]).unwrap();
        let w = Weight::geometric(&sg, vec![0.5, 0.5]).unwrap();
        assert!((w.retained_mass() - 1.0).abs() < 1e-14);
        assert!(w.tail_bound() <= 1e-12);
        assert!(w.retained().iter().all(|(s, _)| s.0[0] >= s.0[1].abs()));
    }

    #[test]
    fn invalid_ratios() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        assert!(Weight::geometric(&sg, vec![1.0]).is_err());
        assert!(Weight::geometric(&sg, vec![0.0]).is_err());
        assert!(Weight::geometric(&sg, vec![0.5, 0.5]).is_err());
    }
}
