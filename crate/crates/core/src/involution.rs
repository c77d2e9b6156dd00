//! The non-symplectic involution `x -> -x` and its Nikulin invariants.
//!
//! `r` comes from the singularity inventory, `a` from the genus of the main
//! fixed curve, and `delta` from the invariant lattice itself: `X / iota` is
//! (a quotient of) the toric surface `P(w2, w3, w4)`, so the invariant lattice
//! is the `2`-twisted Picard lattice of the resolved quotient glued with half
//! the classes of the branch curves.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::groups::Symmetry;
use crate::lattice::{forced_delta, invariant_a, IntegralLattice, NikulinTriple};
use crate::linalg::{int, integer_solve, rat, IntMatrix};
use crate::potential::Potential;
use crate::toric::{det2, Ray, SmoothToricSurface, SurfaceClasses, ToricPlane};
use crate::wps::{curve_genus, hypersurface_singularities, SingularityRecord, WeightSystem};

/// Fixed curves of `iota` on the resolved surface, before resolving the
/// singular points: the curve `{x = 0}` and one rational curve `{y_i = 0}`
/// for each listed coordinate index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocus {
    pub curve_genus: i64,
    pub extra_rational_curves: Vec<usize>,
}

/// Scans `lambda = exp(2 pi i theta)` with `theta w1 = 1/2 mod 1`: the points
/// with `iota(p) = lambda . p` have `y_i = 0` whenever `theta w_i` is not integral.
pub fn fixed_locus(p: &Potential, ws: &WeightSystem) -> Result<FixedLocus> {
    let w = &ws.weights;
    if w.len() != 4 || p.n() != 4 {
        return Err(Error::NotK3Shape(format!("{w:?}")));
    }
    let curve_genus = curve_genus(ws.degree, w[1], w[2], w[3])?;
    let mut extra = BTreeSet::new();
    for k in 0..w[0] {
        let theta = (rat(1, 2) + rat(k, 1)) / rat(w[0], 1);
        let vanish: Vec<usize> = (1..4).filter(|&i| !(&theta * rat(w[i], 1)).is_integer()).collect();
        if let [i] = vanish[..] {
            extra.insert(i);
        }
    }
    Ok(FixedLocus { curve_genus, extra_rational_curves: extra.into_iter().collect() })
}

/// `r = 1 + sum of the ranks contributed by the singular points`.
pub fn invariant_r(records: &[SingularityRecord]) -> i64 {
    1 + records.iter().map(SingularityRecord::invariant_rank).sum::<i64>()
}

/// Output of the toric computation of the invariant lattice.
#[derive(Clone, Debug)]
pub struct LatticeRoute {
    pub r: i64,
    pub a: i64,
    pub delta: u8,
    /// Odd toric curves: components of the branch locus besides the main curve.
    pub odd_rays: usize,
    /// Minimal resolution of the quotient plane.
    pub plane: SmoothToricSurface,
    /// The surface after the canonical resolution of the branch locus.
    pub surface: SmoothToricSurface,
    pub orders: Vec<i64>,
    pub nodes: Vec<i64>,
    pub lattice: IntegralLattice,
}

/// The rational function `F = f / mu^2` on the quotient plane, with `mu` a
/// Laurent monomial in `y, z, w` carrying the weight and character of `x`.
struct BranchFunction {
    plane: ToricPlane,
    exponents: Vec<[i64; 3]>,
}

impl BranchFunction {
    fn new(p: &Potential, w: &[i64], gens: &[Symmetry]) -> Result<Self> {
        let plane = ToricPlane::from_symmetries([w[1], w[2], w[3]], gens)?;
        // a w2 + b w3 + c w4 = w1 and a g2 + b g3 + c g4 = g1 mod 1
        let mut rows = vec![vec![int(w[1]), int(w[2]), int(w[3])]];
        let mut rhs = vec![int(w[0])];
        let m = gens.len();
        rows[0].extend(std::iter::repeat_n(int(0), m));
        for (j, g) in gens.iter().enumerate() {
            let e = g.entries();
            let den = crate::linalg::common_denominator(e);
            let dq = BigRational::from_integer(den.clone());
            let mut row: Vec<BigInt> = (1..4).map(|i| (&e[i] * &dq).to_integer()).collect();
            row.extend((0..m).map(|t| if t == j { -den.clone() } else { int(0) }));
            rows.push(row);
            rhs.push((&e[0] * &dq).to_integer());
        }
        let a = IntMatrix::from_vec(rows.len(), 3 + m, rows.concat());
        let (sol, _) = integer_solve(&a, &rhs)
            .ok_or_else(|| Error::Consistency("no monomial carries the character of x".into()))?;
        let mu: Vec<i64> = sol[..3].iter().map(|x| x.to_i64().expect("small monomial")).collect();
        let exponents = p
            .monomials()
            .into_iter()
            .filter(|mon| mon[0] == 0)
            .map(|mon| [mon[1] - 2 * mu[0], mon[2] - 2 * mu[1], mon[3] - 2 * mu[2]])
            .collect();
        Ok(BranchFunction { plane, exponents })
    }

    fn order(&self, u: Ray) -> i64 {
        self.exponents.iter().map(|m| self.plane.pair(m, u)).min().expect("f has monomials")
    }

    /// Lattice length of the face of the Newton polygon selected by `u`:
    /// the number of zeros of `F` on the open orbit of `D_u`.
    fn face_length(&self, u: Ray) -> i64 {
        let vals: Vec<i64> = self.exponents.iter().map(|m| self.plane.pair(m, u)).collect();
        let mn = *vals.iter().min().expect("f has monomials");
        let face: Vec<&[i64; 3]> = self.exponents.iter().zip(&vals).filter(|(_, &v)| v == mn).map(|(m, _)| m).collect();
        if face.len() < 2 {
            return 0;
        }
        let coords: Vec<[i64; 2]> = face
            .iter()
            .map(|m| {
                let d = [m[0] - face[0][0], m[1] - face[0][1], m[2] - face[0][2]];
                [self.plane.pair(&d, [1, 0]), self.plane.pair(&d, [0, 1])]
            })
            .collect();
        let g = coords.iter().fold(0i64, |g, c| g.gcd(&c[0]).gcd(&c[1]));
        // position along the primitive direction of the face
        let dir = coords.iter().find(|c| c != &&[0, 0]).map(|c| [c[0] / g, c[1] / g]).expect("distinct monomials");
        let t: Vec<i64> = coords.iter().map(|c| if dir[0] != 0 { c[0] / dir[0] } else { c[1] / dir[1] }).collect();
        t.iter().max().unwrap() - t.iter().min().unwrap()
    }
}

/// Computes `Pic` of the minimal resolution of `X / <G, iota>` via the toric
/// quotient plane, and reads `(r, a, delta)` off the glued lattice. `gens`
/// generate the diagonal group `G` (containing `J`), acting on `x, y, z, w`.
pub fn lattice_route(p: &Potential, gens: &[Symmetry]) -> Result<LatticeRoute> {
    let w = p.charges()?.w;
    if w.len() != 4 {
        return Err(Error::NotK3Shape(format!("{w:?}")));
    }
    let f = BranchFunction::new(p, &w, gens)?;
    let plane = f.plane.fan().resolve();
    let mut rays: Vec<Ray> = plane.rays().to_vec();
    // canonical resolution: blow up torus-fixed points where the branch
    // divisor has multiplicity at least two
    loop {
        let n = rays.len();
        let hit = (0..n).find(|&i| {
            let (u, v) = (rays[i], rays[(i + 1) % n]);
            let s = [u[0] + v[0], u[1] + v[1]];
            let (ou, ov) = (f.order(u), f.order(v));
            f.order(s) - ou - ov + ou.rem_euclid(2) + ov.rem_euclid(2) >= 2
        });
        match hit {
            Some(i) => {
                let (u, v) = (rays[i], rays[(i + 1) % n]);
                rays.insert(i + 1, [u[0] + v[0], u[1] + v[1]]);
            }
            None => break,
        }
    }
    let surface = SmoothToricSurface::new(rays)?;
    let n = surface.len();
    let orders: Vec<i64> = surface.rays().iter().map(|&u| f.order(u)).collect();
    let odd: Vec<usize> = (0..n).filter(|&i| orders[i].rem_euclid(2) == 1).collect();
    let nodes: Vec<i64> = (0..n).map(|i| if odd.contains(&i) { f.face_length(surface.rays()[i]) } else { 0 }).collect();
    debug_assert_eq!(det2(surface.rays()[0], surface.rays()[1]), 1);

    let (gram, classes) = surface.default_picard_data();
    let k = gram.rows();
    // the main branch curve is the closure of {F = 0}: minus div of the poles
    let mut main = vec![int(0); k];
    for i in 0..n {
        for (t, c) in main.iter_mut().enumerate() {
            *c -= &classes[(t, i)] * int(orders[i]);
        }
    }
    let mut curves: Vec<Vec<BigInt>> = odd.iter().map(|&i| classes.column(i)).collect();
    curves.push(main);
    let main_idx = curves.len() - 1;
    let mut points = Vec::new();
    for (c, &i) in odd.iter().enumerate() {
        for _ in 0..nodes[i] {
            points.push(vec![c, main_idx]);
        }
    }
    let blown = SurfaceClasses { gram, curves }.blow_up_points(&points);
    let lattice = IntegralLattice::new(blown.gram.clone())?.twist(2).glue_half_classes(&blown.curves)?;
    if !lattice.is_even() {
        return Err(Error::Consistency("glued lattice is odd".into()));
    }
    let a = lattice.two_elementary_a()?;
    let delta = lattice.delta()?;
    Ok(LatticeRoute {
        r: lattice.rank() as i64,
        a,
        delta,
        odd_rays: odd.len(),
        plane,
        surface,
        orders,
        nodes,
        lattice,
    })
}

/// Orders of vanishing of `F = f / mu^2` along the divisors of `rays`, in the
/// lattice coordinates used by [`lattice_route`].
pub fn branch_orders(p: &Potential, gens: &[Symmetry], rays: &[Ray]) -> Result<Vec<i64>> {
    let w = p.charges()?.w;
    let f = BranchFunction::new(p, &w, gens)?;
    Ok(rays.iter().map(|&u| f.order(u)).collect())
}

/// Combines the orbit count `r`, the genus `g` of the main fixed curve and
/// the lattice route, checking that all three agree.
pub fn checked_triple(route: &LatticeRoute, r: i64, g: i64) -> Result<NikulinTriple> {
    let a = invariant_a(r, g)?;
    if route.r != r {
        return Err(Error::Consistency(format!("Picard rank {} but r = {r}", route.r)));
    }
    if route.lattice.det().abs() != BigInt::from(1) << a {
        return Err(Error::Consistency(format!("|det| = {} but a = {a}", route.lattice.det())));
    }
    if route.a != a {
        return Err(Error::Consistency(format!("lattice a = {} but 22 - r - 2g = {a}", route.a)));
    }
    if g >= 1 && route.odd_rays as i64 != (r - a) / 2 {
        return Err(Error::Consistency(format!("{} odd curves but k = {}", route.odd_rays, (r - a) / 2)));
    }
    let t = NikulinTriple::new(r, a, route.delta);
    if let Some(d) = forced_delta(r, a) {
        if d != route.delta {
            return Err(Error::Consistency(format!("delta {} contradicts admissibility of {t}", route.delta)));
        }
    }
    if !t.is_admissible() {
        return Err(Error::Consistency(format!("{t} is not an admissible triple")));
    }
    Ok(t)
}

pub fn invariant_delta(p: &Potential) -> Result<u8> {
    Ok(lattice_route(p, &[])?.delta)
}

/// `(r, a, delta)` of the resolved surface with its involution.
pub fn nikulin_triple(p: &Potential) -> Result<NikulinTriple> {
    let ws = WeightSystem::of(p)?;
    let records = hypersurface_singularities(p, &ws)?;
    let r = invariant_r(&records);
    let g = curve_genus(ws.degree, ws.weights[1], ws.weights[2], ws.weights[3])?;
    let route = lattice_route(p, &[])?;
    checked_triple(&route, r, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(f: &str) -> NikulinTriple {
        nikulin_triple(&Potential::parse_k3(f).unwrap()).unwrap()
    }

    #[test]
    fn smooth_sextic() {
        assert_eq!(triple("y^6 + z^6 + w^6"), NikulinTriple::new(1, 1, 1));
    }

    #[test]
    fn weights_9432() {
        assert_eq!(triple("y^4*w + z^6 + w^9"), NikulinTriple::new(10, 6, 1));
        assert_eq!(triple("y^4*w + w^7*y + z^6"), NikulinTriple::new(10, 6, 1));
        assert_eq!(triple("y^3 + z^10 + w^15"), NikulinTriple::new(10, 4, 0));
    }

    #[test]
    fn fixed_curves() {
        let p = Potential::parse_k3("y^4*w + z^6 + w^9").unwrap();
        let ws = WeightSystem::of(&p).unwrap();
        let fl = fixed_locus(&p, &ws).unwrap();
        assert_eq!(fl.curve_genus, 3);
        let p = Potential::parse_k3("y^6 + z^6 + w^6").unwrap();
        let fl = fixed_locus(&p, &WeightSystem::of(&p).unwrap()).unwrap();
        assert_eq!(fl, FixedLocus { curve_genus: 10, extra_rational_curves: vec![] });
    }
}
