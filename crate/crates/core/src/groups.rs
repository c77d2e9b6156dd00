//! Diagonal symmetry groups. A subgroup `G` of `(Q/Z)^n` is stored as the
//! lattice `L = G + Z^n` in Hermite normal form, so `G = L / Z^n`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    column_hermite_form, common_denominator, frac, int, invert, primitive_extension, rat_from_int,
    smith_normal_form, IntMatrix, RatMatrix,
};
use crate::potential::{AtomKind, Potential, Shape};

/// Default cap on the number of elements `enumerate_elements` will list.
pub const DEFAULT_GROUP_BOUND: u64 = 10_000;

/// The bound from `K3BHCR_GROUP_BOUND`, or the default.
pub fn group_bound() -> u64 {
    std::env::var("K3BHCR_GROUP_BOUND").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_GROUP_BOUND)
}

/// An element of `(Q/Z)^n`, entries reduced to `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry(Vec<BigRational>);

impl Symmetry {
    pub fn new(v: Vec<BigRational>) -> Self {
        Symmetry(v.iter().map(frac).collect())
    }

    pub fn zero(n: usize) -> Self {
        Symmetry(vec![BigRational::zero(); n])
    }

    /// Parses `(1/2, 1/2, 0, 0)`; `1` reads as `0`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v: std::result::Result<Vec<BigRational>, _> = inner.split(',').map(|t| t.trim().parse()).collect();
        v.map(Symmetry::new).map_err(|_| Error::Parse(format!("bad symmetry {s}")))
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Symmetry) -> Symmetry {
        Symmetry::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Symmetry {
        let k = BigRational::from_integer(int(k));
        Symmetry::new(self.0.iter().map(|a| a * &k).collect())
    }

    /// Order of the element in `(Q/Z)^n`.
    pub fn order(&self) -> BigInt {
        common_denominator(&self.0)
    }

    pub fn is_symplectic(&self) -> bool {
        self.0.iter().fold(BigRational::zero(), |s, x| s + x).is_integer()
    }

    /// Notation with `1` in place of `0`, as in printed tables.
    pub fn to_table_string(&self) -> String {
        let parts: Vec<String> =
            self.0.iter().map(|x| if x.is_zero() { "1".to_string() } else { x.to_string() }).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Invariant factors `d1 | d2 | ...`, all greater than one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianStructure {
    pub factors: Vec<BigInt>,
}

impl AbelianStructure {
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn as_u64(&self) -> Vec<u64> {
        self.factors.iter().map(|x| x.to_u64().expect("factor fits in u64")).collect()
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// A subgroup `G = C^{-1} Z^n / Z^n` of the diagonal symmetries of the
/// potential with exponent matrix `ambient`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSubgroup {
    ambient: IntMatrix,
    basis: RatMatrix,
}

impl fmt::Debug for DiagonalSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagonalSubgroup(order {}, gens {:?})", self.order(), self.generators())
    }
}

fn canonical_basis(n: usize, columns: &[Vec<BigRational>]) -> RatMatrix {
    let mut all: Vec<BigRational> = columns.iter().flatten().cloned().collect();
    all.push(BigRational::one());
    let den = common_denominator(&all);
    let dq = rat_from_int(&den);
    let mut cols: Vec<Vec<BigInt>> =
        columns.iter().map(|c| c.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = den.clone();
        cols.push(e);
    }
    let h = column_hermite_form(&IntMatrix::from_columns(n, &cols));
    h.to_rational().scale(&BigRational::new(BigInt::one(), den))
}

impl DiagonalSubgroup {
    /// The subgroup generated by `gens` inside `Aut` of `ambient`.
    pub fn from_generators(ambient: &IntMatrix, gens: &[Symmetry]) -> Result<Self> {
        let n = ambient.rows();
        if gens.iter().any(|g| g.len() != n) {
            return Err(Error::NotSubgroup("generator length".into()));
        }
        let cols: Vec<Vec<BigRational>> = gens.iter().map(|g| g.0.clone()).collect();
        let g = DiagonalSubgroup { ambient: ambient.clone(), basis: canonical_basis(n, &cols) };
        if !ambient.to_rational().mul(&g.basis).is_integral() {
            return Err(Error::NotSubgroup("generators are not symmetries of the potential".into()));
        }
        Ok(g)
    }

    fn from_basis(ambient: &IntMatrix, basis: &RatMatrix) -> Self {
        let n = basis.rows();
        let cols: Vec<Vec<BigRational>> = (0..basis.cols()).map(|j| basis.column(j)).collect();
        DiagonalSubgroup { ambient: ambient.clone(), basis: canonical_basis(n, &cols) }
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> &IntMatrix {
        &self.ambient
    }

    /// Columns generate `G + Z^n`; equal to `C^{-1}`.
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// The presentation matrix `C`.
    pub fn c(&self) -> IntMatrix {
        self.basis.inverse().expect("lattice basis is invertible").to_integer().expect("C is integral")
    }

    /// `B` with `A = B C`.
    pub fn b(&self) -> IntMatrix {
        self.ambient.to_rational().mul(&self.basis).to_integer().expect("B is integral")
    }

    pub fn order(&self) -> BigInt {
        self.c().det().abs()
    }

    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().expect("order fits in u64")
    }

    pub fn contains(&self, x: &Symmetry) -> bool {
        let c = self.c().to_rational();
        c.mul_vec(x.entries()).iter().all(|v| v.is_integer())
    }

    pub fn is_subgroup_of(&self, other: &DiagonalSubgroup) -> bool {
        other.c().to_rational().mul(&self.basis).is_integral()
    }

    /// `J_W` inside `G`: `B^{-1} e` integral.
    pub fn contains_j(&self) -> bool {
        let e = vec![BigRational::one(); self.n()];
        invert(&self.b()).map(|bi| bi.mul_vec(&e).iter().all(|x| x.is_integer())).unwrap_or(false)
    }

    /// `G` inside `SL`: `(C^T)^{-1} e` integral.
    pub fn is_symplectic(&self) -> bool {
        let e = vec![BigRational::one(); self.n()];
        self.basis.transpose().mul_vec(&e).iter().all(|x| x.is_integer())
    }

    /// Invariant factors of the group.
    pub fn structure(&self) -> AbelianStructure {
        let snf = smith_normal_form(&self.c());
        AbelianStructure { factors: snf.invariant_factors().into_iter().filter(|x| !x.is_one()).collect() }
    }

    /// Generators from the Smith form of `C`, one per invariant factor.
    pub fn generators(&self) -> Vec<Symmetry> {
        let snf = smith_normal_form(&self.c());
        let v = snf.v.to_rational();
        let mut out = Vec::new();
        for k in 0..self.n() {
            let dk = &snf.d[(k, k)];
            if dk.is_one() {
                continue;
            }
            let inv = BigRational::new(BigInt::one(), dk.clone());
            out.push(Symmetry::new(v.column(k).iter().map(|x| x * &inv).collect()));
        }
        out
    }

    /// Every element exactly once, or `TooLarge` past the enumeration bound.
    pub fn enumerate_elements(&self) -> Result<Vec<Symmetry>> {
        let bound = group_bound();
        let order = self.order();
        if order > BigInt::from(bound) {
            return Err(Error::TooLarge { order: order.to_string(), bound });
        }
        let snf = smith_normal_form(&self.c());
        let v = snf.v.to_rational();
        let n = self.n();
        let dims: Vec<i64> = (0..n).map(|k| snf.d[(k, k)].to_i64().expect("small factor")).collect();
        let mut out = Vec::with_capacity(order.to_usize().unwrap_or(0));
        let mut t = vec![0i64; n];
        loop {
            let y: Vec<BigRational> = (0..n).map(|k| BigRational::new(int(t[k]), int(dims[k]))).collect();
            out.push(Symmetry::new(v.mul_vec(&y)));
            let mut k = 0;
            while k < n {
                t[k] += 1;
                if t[k] < dims[k] {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        Ok(out)
    }

    /// `G^T = (B^T)^{-1} Z^n / Z^n` inside `Aut` of the transposed potential.
    pub fn transpose(&self) -> DiagonalSubgroup {
        let bt = self.b().transpose();
        let basis = invert(&bt).expect("B is invertible");
        DiagonalSubgroup::from_basis(&self.ambient.transpose(), &basis)
    }

    /// Subgroup generated by `self` and `x`.
    pub fn join(&self, x: &Symmetry) -> Result<DiagonalSubgroup> {
        let mut gens = self.generators();
        gens.push(x.clone());
        DiagonalSubgroup::from_generators(&self.ambient, &gens)
    }
}

pub fn aut_group(p: &Potential) -> Result<DiagonalSubgroup> {
    let a = p.exponents();
    let inv = invert(a).map_err(|_| Error::Singular)?;
    Ok(DiagonalSubgroup::from_basis(a, &inv))
}

/// The cyclic group generated by the charge vector.
pub fn j_group(p: &Potential) -> Result<DiagonalSubgroup> {
    let c = p.charges()?;
    let w: Vec<BigInt> = c.w.iter().map(|&x| int(x)).collect();
    let m = primitive_extension(&w)?;
    // columns of M^{-1} are a basis of Z^n whose first column is w
    let mut c0_inv = invert(&m)?;
    let d = BigRational::from_integer(int(c.d));
    for i in 0..p.n() {
        c0_inv[(i, 0)] = &c0_inv[(i, 0)] / &d;
    }
    Ok(DiagonalSubgroup::from_basis(p.exponents(), &c0_inv))
}

/// `SL(W) = A^{-1} K` with `K = {u : w^T . u = 0 mod d^T}`, `w^T, d^T` the
/// weights and degree of the transpose.
pub fn sl_group(p: &Potential) -> Result<DiagonalSubgroup> {
    let a = p.exponents();
    let inv = invert(a).map_err(|_| Error::Singular)?;
    let ct = p.transpose().charges()?;
    let wt: Vec<BigInt> = ct.w.iter().map(|&x| int(x)).collect();
    // wt^T U = e1^T with U = M^T
    let u = primitive_extension(&wt)?.transpose();
    let mut k = u.clone();
    for i in 0..p.n() {
        k[(i, 0)] = &u[(i, 0)] * int(ct.d);
    }
    Ok(DiagonalSubgroup::from_basis(a, &inv.mul(&k.to_rational())))
}

/// Invariant factors of `g / h`.
pub fn quotient_structure(g: &DiagonalSubgroup, h: &DiagonalSubgroup) -> Result<AbelianStructure> {
    let m = g.c().to_rational().mul(h.basis());
    let m = m.to_integer().ok_or_else(|| Error::NotSubgroup("h is not contained in g".into()))?;
    let snf = smith_normal_form(&m);
    Ok(AbelianStructure { factors: snf.invariant_factors().into_iter().filter(|x| !x.is_one()).collect() })
}

/// `x^T A y mod 1` for `x` in `Aut(W^T)` and `y` in `Aut(W)`.
pub fn pairing(a: &IntMatrix, x: &Symmetry, y: &Symmetry) -> BigRational {
    let ay = a.to_rational().mul_vec(y.entries());
    frac(&x.entries().iter().zip(&ay).fold(BigRational::zero(), |s, (u, v)| s + u * v))
}

/// Elements of `Aut(W^T)` pairing to zero with all of `g`, by enumeration.
pub fn orthogonal_complement(p: &Potential, g: &DiagonalSubgroup) -> Result<Vec<Symmetry>> {
    let aut_t = aut_group(&p.transpose())?;
    let gens = g.generators();
    let a = p.exponents();
    Ok(aut_t.enumerate_elements()?.into_iter().filter(|x| gens.iter().all(|y| pairing(a, x, y).is_zero())).collect())
}

/// All `G` with `J_W <= G <= SL(W)`, ordered by group order then basis.
pub fn intermediate_subgroups(p: &Potential) -> Result<Vec<DiagonalSubgroup>> {
    let j = j_group(p)?;
    let sl = sl_group(p)?;
    let elems = sl.enumerate_elements()?;
    let mut seen: HashSet<DiagonalSubgroup> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(j.clone());
    queue.push_back(j);
    while let Some(h) = queue.pop_front() {
        for x in &elems {
            if h.contains(x) {
                continue;
            }
            let k = h.join(x)?;
            if seen.insert(k.clone()) {
                queue.push_back(k);
            }
        }
    }
    let mut out: Vec<DiagonalSubgroup> = seen.into_iter().collect();
    out.sort_by_key(|g| (g.order(), format!("{:?}", g.basis())));
    Ok(out)
}

/// The diagonal symmetry of an atom placed on all `n` variables.
pub fn atomic_generator(atom: &crate::potential::Atom, n: usize) -> Symmetry {
    let mut v = vec![BigRational::zero(); n];
    for (k, x) in atom.generator().into_iter().enumerate() {
        v[atom.vars[k]] = x;
    }
    Symmetry::new(v)
}

/// Closed forms for `|SL|` of the five shapes, with exponents in the shape's
/// normal form.
pub fn sl_order_closed_form(shape: Shape, a: [i64; 3]) -> i64 {
    let [a1, a2, a3] = a;
    match shape {
        Shape::Chain => 2 * (a1 * a2 * a3).gcd(&(1 - a1 + a1 * a2)),
        Shape::Loop => 2 * (1 + a1 * a2 * a3).gcd(&(1 - a1 + a1 * a2)),
        Shape::Fermat => 2 * a1 * a2 * a3 / a1.lcm(&a2).lcm(&a3),
        Shape::ChainFermat => {
            let g = (a1 * a2).gcd(&(a1 - 1));
            if a3 % 2 == 1 {
                2 * a3 * g
            } else {
                a3 * g
            }
        }
        Shape::LoopFermat => {
            let g = (a1 * a2 - 1).gcd(&(a2 - 1));
            if a3 % 2 == 1 {
                2 * a3 * g
            } else {
                a3 * g
            }
        }
    }
}

fn theta(a: &[i64]) -> i64 {
    let mut t = 1i64;
    let mut prod = 1i64;
    for (j, &x) in a.iter().enumerate().take(a.len().saturating_sub(1)) {
        prod *= x;
        t += if j % 2 == 0 { -prod } else { prod };
    }
    t
}

/// `|SL|` of `x^2` plus one atom in `n` variables, via
/// `Theta = 1 + sum_{j<n} (-1)^j a1...aj`.
pub fn sl_order_theta(kind: AtomKind, a: &[i64]) -> i64 {
    let prod: i64 = a.iter().product();
    match kind {
        AtomKind::Chain => 2 * prod.gcd(&theta(a)),
        AtomKind::Loop => {
            let s = if a.len() % 2 == 1 { 1 } else { -1 };
            2 * (s + prod).gcd(&theta(a))
        }
        AtomKind::Fermat => {
            let l = a.iter().fold(1i64, |l, &x| l.lcm(&x));
            2 * prod / l
        }
    }
}

/// Element set as an ordered set, for comparisons in tests and reports.
pub fn element_set(g: &DiagonalSubgroup) -> Result<BTreeSet<Symmetry>> {
    Ok(g.enumerate_elements()?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn k3(f: &str) -> Potential {
        Potential::parse_k3(f).unwrap()
    }

    fn sym(s: &str) -> Symmetry {
        Symmetry::parse(s).unwrap()
    }

    #[test]
    fn aut_orders() {
        assert_eq!(aut_group(&k3("y^6+z^6+w^6")).unwrap().order(), int(432));
        assert_eq!(aut_group(&k3("y^3z+z^7y+w^10")).unwrap().order(), int(400));
        let p = Potential::parse("x^7").unwrap();
        let g = aut_group(&p).unwrap();
        assert_eq!(g.generators(), vec![Symmetry::new(vec![rat(1, 7)])]);
    }

    #[test]
    fn j_orders() {
        let p = k3("y^6+z^6+w^6");
        let j = j_group(&p).unwrap();
        assert_eq!(j.order(), int(6));
        let q = Symmetry::new(p.charges().unwrap().q);
        let el = element_set(&j).unwrap();
        let expect: BTreeSet<Symmetry> = (0..6).map(|k| q.scale(k)).collect();
        assert_eq!(el, expect);
        assert_eq!(j_group(&k3("y^3+yz^9+zw^10")).unwrap().order(), int(54));
        assert_eq!(j_group(&k3("y^4w+w^7y+z^6")).unwrap().order(), int(18));
    }

    #[test]
    fn sl_orders() {
        assert_eq!(sl_group(&k3("y^6+z^6+w^6")).unwrap().order(), int(72));
        let p = k3("y^3z+z^7y+w^10");
        let sl = sl_group(&p).unwrap();
        assert_eq!(sl.order(), int(40));
        let els = sl.enumerate_elements().unwrap();
        assert_eq!(els.len(), 40);
        assert!(els.iter().all(|g| g.is_symplectic()));
        let brute = aut_group(&p).unwrap().enumerate_elements().unwrap().into_iter().filter(|g| g.is_symplectic()).count();
        assert_eq!(brute, 40);
        assert_eq!(sl_group(&k3("z^7y+y^3w+w^10")).unwrap().order(), int(30));
    }

    #[test]
    fn membership_tests() {
        let p = k3("y^6+z^6+w^6");
        let (j, sl, aut) = (j_group(&p).unwrap(), sl_group(&p).unwrap(), aut_group(&p).unwrap());
        assert!(j.contains_j() && sl.contains_j() && aut.contains_j());
        assert!(j.is_symplectic() && sl.is_symplectic() && !aut.is_symplectic());
        assert!(j.is_subgroup_of(&sl) && sl.is_subgroup_of(&aut) && !aut.is_subgroup_of(&sl));
        let g = DiagonalSubgroup::from_generators(p.exponents(), &[sym("(1/2,1/2,0,0)")]).unwrap();
        assert!(!g.contains_j());
    }

    #[test]
    fn quotient_examples() {
        let p = k3("y^6+z^6+w^6");
        let s = quotient_structure(&sl_group(&p).unwrap(), &j_group(&p).unwrap()).unwrap();
        assert_eq!(s.as_u64(), vec![2, 6]);
        let p = k3("z^7y+y^3w+w^10");
        let s = quotient_structure(&sl_group(&p).unwrap(), &j_group(&p).unwrap()).unwrap();
        assert_eq!(s.as_u64(), vec![3]);
        let j = j_group(&p).unwrap();
        assert!(quotient_structure(&j, &j).unwrap().is_trivial());
        assert!(quotient_structure(&j, &sl_group(&p).unwrap()).is_err());
    }

    #[test]
    fn transpose_examples() {
        let p = k3("y^6+z^6+w^6");
        let aut = aut_group(&p).unwrap();
        assert_eq!(aut.transpose().order(), int(1));
        let j = j_group(&p).unwrap();
        assert_eq!(j.transpose(), sl_group(&p.transpose()).unwrap());
        let sl = sl_group(&p).unwrap();
        assert_eq!(sl.order() * sl.transpose().order(), int(432));
        assert_eq!(sl.transpose().transpose(), sl);
    }

    #[test]
    fn pairing_examples() {
        let p = k3("y^3z+z^9w+w^10");
        let a = p.exponents();
        let aut = aut_group(&p).unwrap().enumerate_elements().unwrap();
        let zero = Symmetry::zero(4);
        assert!(aut.iter().all(|y| pairing(a, &zero, y).is_zero()));
        let j = j_group(&p).unwrap().enumerate_elements().unwrap();
        let slt = sl_group(&p.transpose()).unwrap().enumerate_elements().unwrap();
        assert!(slt.iter().all(|x| j.iter().all(|y| pairing(a, x, y).is_zero())));
    }

    #[test]
    fn enumeration_trivial() {
        let p = k3("y^6+z^6+w^6");
        let t = DiagonalSubgroup::from_generators(p.exponents(), &[]).unwrap();
        assert_eq!(t.enumerate_elements().unwrap(), vec![Symmetry::zero(4)]);
    }

    #[test]
    fn subgroups_fermat() {
        let p = k3("y^6+z^6+w^6");
        let subs = intermediate_subgroups(&p).unwrap();
        // subgroups of Z/2 x Z/6
        assert_eq!(subs.len(), 10);
        let g = DiagonalSubgroup::from_generators(p.exponents(), &[sym("(1/2,1/2,0,0)"), sym("(1/2,1/6,1/6,1/6)")])
            .unwrap();
        assert!(subs.contains(&g));
        let p = k3("y^3z+z^9w+w^10");
        assert_eq!(intermediate_subgroups(&p).unwrap(), vec![j_group(&p).unwrap()]);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(sl_order_closed_form(Shape::Chain, [5, 5, 6]), 6);
        assert_eq!(sl_order_closed_form(Shape::ChainFermat, [3, 10, 10]), 20);
        assert_eq!(sl_order_closed_form(Shape::LoopFermat, [3, 7, 10]), 20);
        assert_eq!(sl_order_theta(AtomKind::Chain, &[5, 5, 6]), 6);
        assert_eq!(sl_order_theta(AtomKind::Fermat, &[6, 6, 6]), 72);
    }

    #[test]
    fn parse_symmetry() {
        assert_eq!(sym("(1,14/15,7/15,3/5)"), Symmetry::new(vec![rat(0, 1), rat(14, 15), rat(7, 15), rat(3, 5)]));
        assert_eq!(sym("(1,14/15,7/15,3/5)").to_table_string(), "(1,14/15,7/15,3/5)");
        assert_eq!(sym("(0,1/2,1/2,0)").to_string(), "(0, 1/2, 1/2, 0)");
    }
}
