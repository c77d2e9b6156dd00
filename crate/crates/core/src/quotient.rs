//! Fixed points of diagonal symplectic symmetries, the singularities of
//! `X / G~` for `J <= G <= SL`, and the Nikulin triple of the induced involution.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::groups::{j_group, AbelianStructure, DiagonalSubgroup, Symmetry};
use crate::involution::{checked_triple, lattice_route, nikulin_triple, LatticeRoute};
use crate::lattice::NikulinTriple;
use crate::linalg::{frac, rat};
use crate::potential::Potential;
use crate::wps::{curve_genus, gcd_slice, stratum_points, WeightSystem};

/// `true` when some `theta` has `theta w_i = g_i mod 1` for all `i` in `s`,
/// i.e. `g` fixes the points with support `s`.
pub fn acts_as_scalar(g: &Symmetry, s: &[usize], w: &[i64]) -> bool {
    let e = g.entries();
    let i0 = s[0];
    (0..w[i0]).any(|k| {
        let theta = (&e[i0] + rat(k, 1)) / rat(w[i0], 1);
        s.iter().all(|&i| frac(&(&theta * rat(w[i], 1))) == e[i])
    })
}

/// Points of `W` with a given coordinate support fixed by a symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumFixedPoint {
    pub support: Vec<usize>,
    /// `None` when the whole stratum is fixed (a fixed curve or surface).
    pub points: Option<i64>,
    /// `k` of the `A_k` point of `W` at these points; `0` when smooth.
    pub singularity: i64,
    /// The points come in pairs `(+-x : ...)` exchanged by `iota`.
    pub iota_pairs: bool,
}

pub fn fixed_points(p: &Potential, ws: &WeightSystem, g: &Symmetry) -> Result<Vec<StratumFixedPoint>> {
    let w = &ws.weights;
    let n = w.len();
    let full: Vec<usize> = (0..n).collect();
    if acts_as_scalar(g, &full, w) {
        return Ok(vec![StratumFixedPoint { support: full, points: None, singularity: 0, iota_pairs: false }]);
    }
    let mut out = Vec::new();
    for size in 1..=n {
        for s in supports(n, size) {
            if !acts_as_scalar(g, &s, w) {
                continue;
            }
            if size > 2 {
                return Err(Error::UnsupportedStratum(format!("{g} fixes the stratum {s:?}")));
            }
            let h = gcd_slice(&s.iter().map(|&i| w[i]).collect::<Vec<_>>());
            match stratum_points(p, w, &s)? {
                Some(0) => {}
                Some(k) => out.push(StratumFixedPoint {
                    support: s.clone(),
                    points: Some(k),
                    singularity: h - 1,
                    iota_pairs: s[0] == 0 && k % 2 == 0,
                }),
                None => return Err(Error::UnsupportedStratum(format!("{g} fixes the curve on {s:?}"))),
            }
        }
    }
    Ok(out)
}

fn supports(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Singular points of `X / G~` over one coordinate stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSingularity {
    pub support: Vec<usize>,
    /// Points of `W` on the stratum.
    pub points: i64,
    /// `A_k` type of the points on `W`.
    pub singularity_on_w: i64,
    /// Order of the stabilizer in `G~`.
    pub stabilizer: i64,
    /// `A_k` type in the quotient.
    pub ade_type: i64,
    /// Singular points of `X / G~` of this type.
    pub g_orbits: i64,
    /// Orbits of the involution on them.
    pub j_orbits: i64,
}

/// Orbit counts for `G`, the covering data of the main fixed curve and the
/// resulting invariants.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub group_order: i64,
    pub j_order: i64,
    pub singularities: Vec<QuotientSingularity>,
    /// `(points, stabilizer order)` on the main curve `{x = 0}`.
    pub ramification: Vec<(i64, i64)>,
    pub curve_genus: i64,
    pub quotient_genus: i64,
    pub r: i64,
}

impl OrbitData {
    /// Quotient singularities grouped by type: `k -> number of A_k points`.
    pub fn ade_totals(&self) -> std::collections::BTreeMap<i64, i64> {
        let mut m = std::collections::BTreeMap::new();
        for s in &self.singularities {
            *m.entry(s.ade_type).or_insert(0) += s.g_orbits;
        }
        m
    }
}

/// `g'` with `2g - 2 = m (2g' - 2) + sum (e_p - 1)` for a cover of degree `m`;
/// `ramification` lists `(points, e)` upstairs.
pub fn riemann_hurwitz_genus(g: i64, m: i64, ramification: &[(i64, i64)]) -> Result<i64> {
    let tot = 2 * g - 2 - ramification.iter().map(|&(n, e)| n * (e - 1)).sum::<i64>();
    if m <= 0 || tot % m != 0 || (tot / m) % 2 != 0 {
        return Err(Error::InconsistentRamification(format!("g = {g}, m = {m}, ramification {ramification:?}")));
    }
    let g2 = (tot / m + 2) / 2;
    if g2 < 0 {
        return Err(Error::InconsistentRamification(format!("negative genus from g = {g}, m = {m}")));
    }
    Ok(g2)
}

fn small(x: BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::TooLarge { order: x.to_string(), bound: i64::MAX as u64 })
}

/// Stabilizers and orbits of `G` (containing `J`) and of `<G, iota>` on every
/// coordinate stratum of size at most two.
pub fn orbit_data(p: &Potential, g: &DiagonalSubgroup) -> Result<OrbitData> {
    let ws = WeightSystem::of(p)?;
    let w = &ws.weights;
    let j = j_group(p)?;
    if !j.is_subgroup_of(g) {
        return Err(Error::NotSubgroup("G does not contain J".into()));
    }
    let elems = g.enumerate_elements()?;
    let iota = Symmetry::new((0..w.len()).map(|i| if i == 0 { rat(1, 2) } else { rat(0, 1) }).collect());
    let plus: BTreeSet<Symmetry> = elems.iter().flat_map(|e| [e.clone(), e.add(&iota)]).collect();
    let n_g = elems.len() as i64;
    let n_plus = plus.len() as i64;
    let n_j = small(j.order())?;
    let mut singularities = Vec::new();
    let mut ramification = Vec::new();
    let mut r = 1;
    for s in (1..=2).flat_map(|k| supports(w.len(), k)) {
        let h = gcd_slice(&s.iter().map(|&i| w[i]).collect::<Vec<_>>());
        let stab = elems.iter().filter(|e| acts_as_scalar(e, &s, w)).count() as i64;
        let n = match stratum_points(p, w, &s)? {
            None => {
                if stab * h != n_j {
                    return Err(Error::UnsupportedStratum(format!("curve on {s:?} with nontrivial isotropy")));
                }
                continue;
            }
            Some(0) => continue,
            Some(n) => n,
        };
        let stab_plus = plus.iter().filter(|e| acts_as_scalar(e, &s, w)).count() as i64;
        if (stab * h) % n_j != 0 || (n * stab) % n_g != 0 || (n * stab_plus) % n_plus != 0 {
            return Err(Error::UnsupportedLocalAction(format!("stratum {s:?}")));
        }
        let order = stab * h / n_j;
        let g_orbits = n * stab / n_g;
        let j_orbits = n * stab_plus / n_plus;
        if order > 1 {
            r += (order - 1) * j_orbits;
            singularities.push(QuotientSingularity {
                support: s.clone(),
                points: n,
                singularity_on_w: h - 1,
                stabilizer: stab / n_j,
                ade_type: order - 1,
                g_orbits,
                j_orbits,
            });
        }
        if !s.contains(&0) {
            ramification.push((n, stab / n_j));
        }
    }
    let g0 = curve_genus(ws.degree, w[1], w[2], w[3])?;
    let quotient_genus = riemann_hurwitz_genus(g0, n_g / n_j, &ramification)?;
    Ok(OrbitData {
        group_order: n_g / n_j,
        j_order: n_j,
        singularities,
        ramification,
        curve_genus: g0,
        quotient_genus,
        r,
    })
}

/// The triple of `X / G~` with its data.
#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub triple: NikulinTriple,
    pub structure: AbelianStructure,
    pub orbits: OrbitData,
    pub route: LatticeRoute,
}

pub fn quotient_singularities(p: &Potential, g: &DiagonalSubgroup) -> Result<Vec<QuotientSingularity>> {
    Ok(orbit_data(p, g)?.singularities)
}

fn is_odd_prime(n: i64) -> bool {
    n > 2 && n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `(r, a, delta)` of the resolution of `X / G~`. `r` counts orbits, `a`
/// follows from the genus of the image of the main curve, `delta` comes from
/// the lattice of the quotient plane.
pub fn quotient_triple(p: &Potential, g: &DiagonalSubgroup) -> Result<QuotientReport> {
    if !g.is_symplectic() {
        return Err(Error::NotSubgroup("G is not contained in SL".into()));
    }
    let orbits = orbit_data(p, g)?;
    let route = lattice_route(p, &g.generators())?;
    let triple = checked_triple(&route, orbits.r, orbits.quotient_genus)?;
    if is_odd_prime(orbits.group_order) && triple.delta != nikulin_triple(p)?.delta {
        return Err(Error::Consistency(format!("odd prime quotient changes delta: {triple}")));
    }
    let structure = crate::groups::quotient_structure(g, &j_group(p)?)?;
    Ok(QuotientReport { triple, structure, orbits, route })
}

/// Triples of `[W / G~]` and of `[W^T / G~^T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPairReport {
    pub structure: AbelianStructure,
    pub triple: NikulinTriple,
    pub transpose_structure: AbelianStructure,
    pub transpose_triple: NikulinTriple,
}

impl MirrorPairReport {
    pub fn holds(&self) -> bool {
        self.triple.dv_mirror().ok() == Some(self.transpose_triple)
    }
}

impl fmt::Display for MirrorPairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "G~ = {} {}  G~T = {} {}  {}",
            self.structure,
            self.triple,
            self.transpose_structure,
            self.transpose_triple,
            if self.holds() { "ok" } else { "FAIL" }
        )
    }
}

/// Computes both triples; a pair violating `(r, a, delta) -> (20 - r, a, delta)`
/// is a `MirrorFailure`.
pub fn mirror_pair_check(p: &Potential, g: &DiagonalSubgroup) -> Result<MirrorPairReport> {
    let pt = p.transpose();
    let gt = g.transpose();
    let a = quotient_triple(p, g)?;
    let b = quotient_triple(&pt, &gt)?;
    let report = MirrorPairReport {
        structure: a.structure,
        triple: a.triple,
        transpose_structure: b.structure,
        transpose_triple: b.triple,
    };
    if !report.holds() {
        return Err(Error::MirrorFailure(report.to_string()));
    }
    Ok(report)
}

/// Total Milnor number of the quotient singularities.
pub fn milnor_total(data: &OrbitData) -> i64 {
    data.singularities.iter().map(|s| s.ade_type * s.g_orbits).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::sl_group;

    fn sym(s: &str) -> Symmetry {
        Symmetry::parse(s).unwrap()
    }

    fn with_j(p: &Potential, gens: &[&str]) -> DiagonalSubgroup {
        let mut g = j_group(p).unwrap();
        for s in gens {
            g = g.join(&sym(s)).unwrap();
        }
        g
    }

    #[test]
    fn riemann_hurwitz_examples() {
        assert_eq!(riemann_hurwitz_genus(9, 3, &[(2, 3)]).unwrap(), 3);
        assert_eq!(riemann_hurwitz_genus(10, 12, &[(18, 2)]).unwrap(), 1);
        assert_eq!(riemann_hurwitz_genus(6, 3, &[(2, 3)]).unwrap(), 2);
        assert!(riemann_hurwitz_genus(2, 2, &[(1, 2)]).is_err());
    }

    #[test]
    fn fermat_sextic_involution_points() {
        let p = Potential::parse_k3("y^6 + z^6 + w^6").unwrap();
        let ws = WeightSystem::of(&p).unwrap();
        let fp = fixed_points(&p, &ws, &sym("(1/2,1/2,1,1)")).unwrap();
        let total: i64 = fp.iter().filter_map(|f| f.points).sum();
        assert_eq!(total, 8);
        assert!(fp.iter().any(|f| f.support == vec![0, 1] && f.points == Some(2)));
        assert!(fp.iter().any(|f| f.support == vec![2, 3] && f.points == Some(6)));
        let id = fixed_points(&p, &ws, &sym("(0,0,0,0)")).unwrap();
        assert_eq!(id[0].points, None);
    }

    #[test]
    fn full_quotient_of_sextic() {
        let p = Potential::parse_k3("y^6 + z^6 + w^6").unwrap();
        let g = sl_group(&p).unwrap();
        let rep = quotient_triple(&p, &g).unwrap();
        assert_eq!(rep.triple, NikulinTriple::new(19, 1, 1));
        assert_eq!(rep.orbits.quotient_genus, 1);
        let tot = rep.orbits.ade_totals();
        assert_eq!(tot.get(&5), Some(&3));
        assert_eq!(tot.get(&1), Some(&3));
        let g2 = with_j(&p, &["(1/2,1/2,0,0)", "(0,1/6,5/6,0)"]);
        assert_eq!(g2, g);
    }

    #[test]
    fn cyclic_quotients() {
        let p = Potential::parse_k3("z^7*y + y^3*w + w^10").unwrap();
        let rep = quotient_triple(&p, &with_j(&p, &["(0,7/15,14/15,3/5)"])).unwrap();
        assert_eq!(rep.orbits.group_order, 3);
        assert_eq!(rep.triple, NikulinTriple::new(13, 3, 1));
        assert_eq!(rep.orbits.quotient_genus, 3);
        assert_eq!(rep.route.plane.len(), 10);
        let p = Potential::parse_k3("z^7 + z*y^3 + y*w^10").unwrap();
        let rep = quotient_triple(&p, &with_j(&p, &["(0,10/21,4/7,20/21)"])).unwrap();
        assert_eq!(rep.triple, NikulinTriple::new(17, 1, 1));
        assert_eq!(rep.orbits.quotient_genus, 2);
        assert_eq!(rep.orbits.ade_totals().get(&11), Some(&1));
        assert!(is_odd_prime(3) && is_odd_prime(7) && !is_odd_prime(9) && !is_odd_prime(2));
    }
}
