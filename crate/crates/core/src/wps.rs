//! Weighted projective spaces and the singularities of `x^2 = f` surfaces.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::potential::Potential;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem {
    pub weights: Vec<i64>,
    pub degree: i64,
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| a.gcd(&b))
}

impl WeightSystem {
    pub fn new(weights: Vec<i64>, degree: i64) -> Self {
        WeightSystem { weights, degree }
    }

    pub fn of(p: &Potential) -> Result<Self> {
        let c = p.charges()?;
        Ok(WeightSystem { weights: c.w, degree: c.d })
    }

    fn gcd_without(&self, skip: &[usize]) -> i64 {
        let rest: Vec<i64> =
            self.weights.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, &w)| w).collect();
        gcd_slice(&rest)
    }

    /// Every `n-1` of the weights are coprime.
    pub fn is_normalized(&self) -> bool {
        (0..self.weights.len()).all(|i| self.gcd_without(&[i]) == 1)
    }

    /// Normalized, and every `n-2` of the weights have gcd dividing the degree.
    pub fn is_well_formed_hypersurface(&self) -> bool {
        let n = self.weights.len();
        if !self.is_normalized() {
            return false;
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.degree % self.gcd_without(&[i, j]) != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_gorenstein(&self) -> bool {
        let s: i64 = self.weights.iter().sum();
        self.weights.iter().all(|&w| s % w == 0)
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.weights.iter().sum::<i64>() == self.degree
    }

    /// The K3 shape: four weights with `d = 2 w1 = w1 + w2 + w3 + w4`.
    pub fn is_k3_shape(&self) -> bool {
        self.weights.len() == 4 && self.degree == 2 * self.weights[0] && self.is_calabi_yau()
    }
}

/// Genus of a smooth degree-`d` curve in `P(w1, w2, w3)`.
pub fn curve_genus(d: i64, w1: i64, w2: i64, w3: i64) -> Result<i64> {
    let ws = [w1, w2, w3];
    let mut v = Ratio::new(d * d, w1 * w2 * w3);
    for i in 0..3 {
        for j in 0..i {
            v -= Ratio::new(d * ws[i].gcd(&ws[j]), ws[i] * ws[j]);
        }
    }
    for &w in &ws {
        v += Ratio::new(d.gcd(&w), w);
    }
    let g = (v - 1) / 2;
    if !g.is_integer() || g < Ratio::from_integer(0) {
        return Err(Error::NonIntegralGenus(g.to_string()));
    }
    Ok(g.to_integer())
}

/// Where on `P(w1,w2,w3,w4)` a singular point sits. Indices are 1-based as in
/// `P_1 = (1:0:0:0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    Vertex(usize),
    EdgeInterior(usize, usize),
    EdgeOneFixedPoint(usize, usize),
    EdgeSwappedPair(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IotaOrbit {
    Fixed,
    SwappedPair,
}

/// `multiplicity` points of type `A_k` at `location`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularityRecord {
    pub ade_type: i64,
    pub location: Location,
    pub multiplicity: i64,
    pub iota_orbit: IotaOrbit,
}

impl SingularityRecord {
    /// Contribution of the record to the rank of the invariant lattice.
    pub fn invariant_rank(&self) -> i64 {
        match self.iota_orbit {
            IotaOrbit::Fixed => self.ade_type * self.multiplicity,
            IotaOrbit::SwappedPair => self.ade_type * self.multiplicity / 2,
        }
    }
}

/// Restriction of the monomials of `p` to the coordinate stratum with support
/// `s`: the monomials involving only variables in `s`.
pub fn monomials_on(p: &Potential, s: &[usize]) -> Vec<Vec<i64>> {
    p.monomials().into_iter().filter(|m| (0..m.len()).all(|i| m[i] == 0 || s.contains(&i))).collect()
}

/// Number of points of `{p = 0}` in the torus orbit of `P(w)` with support
/// exactly `s`, for `|s| <= 2`. `None` when the whole orbit lies in the
/// hypersurface.
pub fn stratum_points(p: &Potential, w: &[i64], s: &[usize]) -> Result<Option<i64>> {
    let rest = monomials_on(p, s);
    match s {
        [_] => Ok(Some(if rest.is_empty() { 1 } else { 0 })),
        [i, j] => match rest.len() {
            0 => Ok(None),
            1 => Ok(Some(0)),
            2 => {
                let (i, j) = (*i, *j);
                let di = rest[0][i] - rest[1][i];
                let dj = rest[0][j] - rest[1][j];
                // the character lattice of the stratum is spanned by (w_j, -w_i)/h
                let h = w[i].gcd(&w[j]);
                let (gi, gj) = (w[j] / h, -w[i] / h);
                let l = if di != 0 { Ratio::new(di, gi) } else { Ratio::new(dj, gj) };
                if !l.is_integer() || di * gj != dj * gi {
                    return Err(Error::Consistency(format!("monomials of {p} not homogeneous on {s:?}")));
                }
                Ok(Some(l.to_integer().abs()))
            }
            _ => Err(Error::UnsupportedStratum(format!("{} monomials on {s:?}", rest.len()))),
        },
        _ => Err(Error::UnsupportedStratum(format!("support {s:?}"))),
    }
}

/// Supports of size one and two in `0..n`.
pub fn small_supports(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(vec![i, j]);
        }
    }
    out
}

fn check_k3(p: &Potential, ws: &WeightSystem) -> Result<()> {
    if p.n() != 4 || !ws.is_k3_shape() {
        return Err(Error::NotK3Shape(format!("{:?}", ws.weights)));
    }
    if !ws.is_well_formed_hypersurface() {
        return Err(Error::NotWellFormed(ws.weights.clone()));
    }
    Ok(())
}

/// Singular points of `{x^2 = f}` found stratum by stratum: a point with
/// support `s` has cyclic isotropy of order `gcd(w_i : i in s)`.
pub fn hypersurface_singularities(p: &Potential, ws: &WeightSystem) -> Result<Vec<SingularityRecord>> {
    check_k3(p, ws)?;
    let w = &ws.weights;
    let mut out = Vec::new();
    for s in small_supports(4) {
        let h = gcd_slice(&s.iter().map(|&i| w[i]).collect::<Vec<_>>());
        let n = match stratum_points(p, w, &s)? {
            None if h > 1 => {
                return Err(Error::Consistency(format!("singular curve along support {s:?}")));
            }
            None | Some(0) => continue,
            Some(n) => n,
        };
        if h == 1 {
            continue;
        }
        let (location, iota_orbit) = match s.as_slice() {
            [i] => (Location::Vertex(i + 1), IotaOrbit::Fixed),
            [0, j] if n == 2 => (Location::EdgeSwappedPair(1, j + 1), IotaOrbit::SwappedPair),
            [0, j] if n == 1 => (Location::EdgeOneFixedPoint(1, j + 1), IotaOrbit::Fixed),
            [0, _] => return Err(Error::Consistency(format!("{n} points on an edge through P1"))),
            [i, j] => (Location::EdgeInterior(i + 1, j + 1), IotaOrbit::Fixed),
            _ => unreachable!(),
        };
        out.push(SingularityRecord { ade_type: h - 1, location, multiplicity: n, iota_orbit });
    }
    Ok(out)
}

/// The same inventory read off the weights case by case: vertices with
/// `w_i > 2`, edges between weights `> 2`, the weight-two edges, and the
/// edges through `P_1`. Whether a weight-two vertex with no even partner lies
/// on the surface is read from `f`.
pub fn weight_formula_singularities(p: &Potential, ws: &WeightSystem) -> Result<Vec<SingularityRecord>> {
    check_k3(p, ws)?;
    let w = &ws.weights;
    let d = ws.degree;
    let mut out = Vec::new();
    for (i, &wi) in w.iter().enumerate().skip(1) {
        if wi > 2 && d % wi != 0 {
            out.push(SingularityRecord {
                ade_type: wi - 1,
                location: Location::Vertex(i + 1),
                multiplicity: 1,
                iota_orbit: IotaOrbit::Fixed,
            });
        }
    }
    for i in 1..4 {
        for j in i + 1..4 {
            let h = w[i].gcd(&w[j]);
            if w[i] > 2 && w[j] > 2 && h > 1 {
                let m = d * h / (w[i] * w[j]);
                if m > 0 {
                    out.push(SingularityRecord {
                        ade_type: h - 1,
                        location: Location::EdgeInterior(i + 1, j + 1),
                        multiplicity: m,
                        iota_orbit: IotaOrbit::Fixed,
                    });
                }
            }
        }
    }
    let twos: Vec<usize> = (1..4).filter(|&i| w[i] == 2).collect();
    let a1 = |loc, m| SingularityRecord { ade_type: 1, location: loc, multiplicity: m, iota_orbit: IotaOrbit::Fixed };
    match twos.as_slice() {
        [i, j] => out.push(a1(Location::EdgeInterior(i + 1, j + 1), d / 2)),
        [i] => {
            let i = *i;
            let partners: Vec<usize> = (1..4).filter(|&j| j != i && w[j] % 2 == 0).collect();
            for &j in &partners {
                out.push(a1(Location::EdgeInterior(i.min(j) + 1, i.max(j) + 1), d / w[j]));
            }
            if partners.is_empty() && monomials_on(p, &[i]).is_empty() {
                out.push(a1(Location::Vertex(i + 1), 1));
            }
        }
        _ => {}
    }
    for i in 1..4 {
        let h = w[0].gcd(&w[i]);
        if h > 1 {
            let (location, iota_orbit, m) = if w[0] % w[i] == 0 {
                (Location::EdgeSwappedPair(1, i + 1), IotaOrbit::SwappedPair, 2)
            } else {
                (Location::EdgeOneFixedPoint(1, i + 1), IotaOrbit::Fixed, 1)
            };
            out.push(SingularityRecord { ade_type: h - 1, location, multiplicity: m, iota_orbit });
        }
    }
    Ok(out)
}

/// Multiset `A_k -> (points, invariant rank)` of an inventory.
pub fn inventory_totals(records: &[SingularityRecord]) -> BTreeMap<i64, (i64, i64)> {
    let mut m = BTreeMap::new();
    for r in records {
        let e = m.entry(r.ade_type).or_insert((0, 0));
        e.0 += r.multiplicity;
        e.1 += r.invariant_rank();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[i64], d: i64) -> WeightSystem {
        WeightSystem::new(w.to_vec(), d)
    }

    #[test]
    fn predicates() {
        assert!(ws(&[3, 1, 1, 1], 6).is_normalized());
        assert!(!ws(&[9, 18, 9, 4], 40).is_normalized());
        assert!(ws(&[1, 1, 1, 1], 4).is_normalized());
        assert!(ws(&[5, 3, 1, 1], 10).is_well_formed_hypersurface());
        assert!(!ws(&[9, 18, 9, 4], 40).is_well_formed_hypersurface());
        assert!(ws(&[1, 1, 1, 1], 4).is_well_formed_hypersurface());
        assert!(ws(&[3, 1, 1, 1], 6).is_gorenstein());
        assert!(!ws(&[5, 3, 1, 1], 10).is_gorenstein());
        assert!(ws(&[1, 1, 1, 1], 4).is_gorenstein());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(curve_genus(6, 1, 1, 1).unwrap(), 10);
        assert_eq!(curve_genus(10, 3, 1, 1).unwrap(), 9);
        assert_eq!(curve_genus(18, 4, 3, 2).unwrap(), 3);
        assert!(matches!(curve_genus(1, 2, 3, 5), Err(Error::NonIntegralGenus(_))));
    }

    #[test]
    fn example_9432() {
        for f in ["y^4w+w^7y+z^6", "y^4w+w^9+z^6"] {
            let p = Potential::parse_k3(f).unwrap();
            let w = WeightSystem::of(&p).unwrap();
            assert_eq!(w.weights, vec![9, 4, 3, 2]);
            let recs = hypersurface_singularities(&p, &w).unwrap();
            let tot = inventory_totals(&recs);
            assert_eq!(tot[&3], (1, 3));
            assert_eq!(tot[&2], (2, 2));
            assert_eq!(tot[&1], (4, 4));
            assert!(recs.iter().any(|r| r.location == Location::EdgeSwappedPair(1, 3)));
            assert_eq!(inventory_totals(&weight_formula_singularities(&p, &w).unwrap()), tot);
        }
    }

    #[test]
    fn smooth_fermat() {
        let p = Potential::parse_k3("y^6+z^6+w^6").unwrap();
        let w = WeightSystem::of(&p).unwrap();
        assert!(hypersurface_singularities(&p, &w).unwrap().is_empty());
    }

    #[test]
    fn transpose_of_3a() {
        let p = Potential::parse_k3("y^3+yz^9+zw^10").unwrap();
        let w = WeightSystem::of(&p).unwrap();
        assert_eq!(w.weights, vec![27, 18, 4, 5]);
        let tot = inventory_totals(&hypersurface_singularities(&p, &w).unwrap());
        let types: Vec<(i64, i64)> = tot.iter().map(|(k, (m, _))| (*k, *m)).collect();
        assert_eq!(types, vec![(1, 1), (3, 1), (4, 1), (8, 1)]);
    }
}
