//! Invertible potentials: parsing, atomic decomposition, charges and the
//! Berglund-Hubsch transpose.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{common_denominator, int, solve_rational, IntMatrix};

/// A Delsarte polynomial with all coefficients equal to one. Row `i` of the
/// exponent matrix is the exponent vector of monomial `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Potential {
    names: Vec<String>,
    exponents: IntMatrix,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({self})")
    }
}

fn var_key(name: &str) -> (usize, char, u64) {
    let letter = name.chars().next().unwrap_or('?');
    let num: u64 = name[letter.len_utf8()..].parse().unwrap_or(0);
    let rank = "xyzw".find(letter).unwrap_or(4 + letter as usize);
    (rank, letter, num)
}

impl Potential {
    pub fn new(names: Vec<String>, exponents: IntMatrix) -> Result<Self> {
        if !exponents.is_square() || exponents.rows() != names.len() {
            return Err(Error::Parse(format!(
                "{} monomials in {} variables",
                exponents.rows(),
                names.len()
            )));
        }
        for i in 0..exponents.rows() {
            for j in 0..exponents.cols() {
                if exponents[(i, j)].is_negative() {
                    return Err(Error::Parse("negative exponent".into()));
                }
            }
        }
        Ok(Potential { names, exponents })
    }

    /// Potential in the variables x, y, z, w (or x1, x2, ... for other counts).
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let names = default_names(n);
        Self::new(names, IntMatrix::from_i64_rows(rows))
    }

    /// Parses text such as `x^2 - y^3*z - z^9*w - w^10` or `y^5z+z^5w+w^5y`.
    /// Signs and coefficients are ignored. Variables are single letters
    /// optionally followed by digits.
    pub fn parse(text: &str) -> Result<Self> {
        let mut monomials: Vec<Vec<(String, i64)>> = Vec::new();
        for term in text.split(['+', '-']) {
            let term: String = term.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
            if term.is_empty() {
                continue;
            }
            monomials.push(parse_monomial(&term)?);
        }
        let mut names: Vec<String> = Vec::new();
        for m in &monomials {
            for (v, _) in m {
                if !names.contains(v) {
                    names.push(v.clone());
                }
            }
        }
        names.sort_by_key(|a| var_key(a));
        let n = names.len();
        if monomials.len() != n {
            return Err(Error::Parse(format!("{} monomials in {} variables", monomials.len(), n)));
        }
        let mut a = IntMatrix::zeros(n, n);
        for (i, m) in monomials.iter().enumerate() {
            for (v, e) in m {
                let j = names.iter().position(|x| x == v).unwrap();
                a[(i, j)] += int(*e);
            }
        }
        Self::new(names, a)
    }

    /// Parses `f(y,z,w)` or a full `x^2 - f`: a missing `x` gets the `x^2` monomial.
    pub fn parse_k3(text: &str) -> Result<Self> {
        let p = Self::parse(text)?;
        if p.names.iter().any(|v| v == "x") {
            return Ok(p);
        }
        Self::parse(&format!("x^2+{text}"))
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.exponents[(i, j)].to_i64().expect("exponent fits in i64")
    }

    pub fn monomial(&self, i: usize) -> Vec<i64> {
        (0..self.n()).map(|j| self.exponent(i, j)).collect()
    }

    pub fn monomials(&self) -> Vec<Vec<i64>> {
        (0..self.n()).map(|i| self.monomial(i)).collect()
    }

    pub fn det(&self) -> BigInt {
        self.exponents.det()
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Exponent matrix transposed; same variable names.
    pub fn transpose(&self) -> Potential {
        Potential { names: self.names.clone(), exponents: self.exponents.transpose() }
    }

    pub fn charges(&self) -> Result<ChargeData> {
        let e = vec![BigRational::one(); self.n()];
        let q = solve_rational(&self.exponents, &e).map_err(|_| Error::Singular)?;
        let d = common_denominator(&q);
        let w = q
            .iter()
            .map(|x| (x * BigRational::from_integer(d.clone())).to_integer().to_i64().expect("weight fits in i64"))
            .collect();
        Ok(ChargeData { q, d: d.to_i64().expect("degree fits in i64"), w })
    }

    pub fn atomic_decomposition(&self) -> Result<AtomicDecomposition> {
        if !self.is_invertible() {
            return Err(Error::Singular);
        }
        let n = self.n();
        let mut options: Vec<Vec<(usize, Option<usize>)>> = Vec::with_capacity(n);
        for i in 0..n {
            let nz: Vec<(usize, i64)> =
                (0..n).filter(|&j| self.exponent(i, j) != 0).map(|j| (j, self.exponent(i, j))).collect();
            let opts = match nz.as_slice() {
                [(v, a)] if *a >= 2 => vec![(*v, None)],
                [(v1, a1), (v2, a2)] => {
                    let mut o = Vec::new();
                    if *a2 == 1 && *a1 >= 2 {
                        o.push((*v1, Some(*v2)));
                    }
                    if *a1 == 1 && *a2 >= 2 {
                        o.push((*v2, Some(*v1)));
                    }
                    o
                }
                _ => vec![],
            };
            if opts.is_empty() {
                return Err(Error::NotAtomicSum(format!("monomial {}", self.monomial_text(i, "*"))));
            }
            options.push(opts);
        }
        let mut chosen = vec![(0, None); n];
        let mut used = vec![false; n];
        if !assign_owners(&options, 0, &mut chosen, &mut used) {
            return Err(Error::NotAtomicSum("no variable owns each monomial".into()));
        }
        // own variable -> (row, pointer)
        let mut row_of = vec![0usize; n];
        let mut ptr: Vec<Option<usize>> = vec![None; n];
        let mut pointed = vec![0usize; n];
        for (row, &(own, p)) in chosen.iter().enumerate() {
            row_of[own] = row;
            ptr[own] = p;
            if let Some(t) = p {
                pointed[t] += 1;
            }
        }
        if let Some(v) = (0..n).find(|&v| pointed[v] > 1) {
            return Err(Error::NotAtomicSum(format!("variable {} is a pointer twice", self.names[v])));
        }
        let exp = |v: usize| self.exponent(row_of[v], v);
        let mut seen = vec![false; n];
        let mut atoms = Vec::new();
        for head in 0..n {
            if pointed[head] != 0 {
                continue;
            }
            let mut vars = vec![head];
            seen[head] = true;
            let mut cur = head;
            while let Some(nx) = ptr[cur] {
                vars.push(nx);
                seen[nx] = true;
                cur = nx;
            }
            let exponents = vars.iter().map(|&v| exp(v)).collect();
            let kind = if vars.len() == 1 { AtomKind::Fermat } else { AtomKind::Chain };
            atoms.push(Atom { kind, vars, exponents });
        }
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // smallest unseen index starts its loop
            let mut vars = vec![start];
            seen[start] = true;
            let mut cur = ptr[start].expect("loop variable has a pointer");
            while cur != start {
                vars.push(cur);
                seen[cur] = true;
                cur = ptr[cur].expect("loop variable has a pointer");
            }
            let exponents = vars.iter().map(|&v| exp(v)).collect();
            atoms.push(Atom { kind: AtomKind::Loop, vars, exponents });
        }
        atoms.sort_by_key(|a| a.vars.iter().copied().min());
        Ok(AtomicDecomposition { atoms })
    }

    /// Classification of a 4-variable `x^2 - f` potential into the five shapes,
    /// with the exponents in the shape's normal form.
    pub fn shape(&self) -> Result<(Shape, [i64; 3])> {
        if self.n() != 4 {
            return Err(Error::NotK3Shape(format!("{} variables", self.n())));
        }
        let dec = self.atomic_decomposition()?;
        let xi = dec
            .atoms
            .iter()
            .position(|a| a.kind == AtomKind::Fermat && a.exponents[0] == 2 && a.vars[0] == 0)
            .or_else(|| dec.atoms.iter().position(|a| a.kind == AtomKind::Fermat && a.exponents[0] == 2))
            .ok_or_else(|| Error::NotK3Shape("no x^2 atom".into()))?;
        let rest: Vec<&Atom> = dec.atoms.iter().enumerate().filter(|(i, _)| *i != xi).map(|(_, a)| a).collect();
        let fermats: Vec<i64> =
            rest.iter().filter(|a| a.kind == AtomKind::Fermat).map(|a| a.exponents[0]).collect();
        let big: Vec<&&Atom> = rest.iter().filter(|a| a.kind != AtomKind::Fermat).collect();
        match (big.as_slice(), fermats.as_slice()) {
            ([], [a1, a2, a3]) => Ok((Shape::Fermat, [*a1, *a2, *a3])),
            ([a], [a3]) => {
                let e = &a.exponents;
                let s = if a.kind == AtomKind::Chain { Shape::ChainFermat } else { Shape::LoopFermat };
                Ok((s, [e[0], e[1], *a3]))
            }
            ([a], []) => {
                let e = &a.exponents;
                let s = if a.kind == AtomKind::Chain { Shape::Chain } else { Shape::Loop };
                Ok((s, [e[0], e[1], e[2]]))
            }
            _ => Err(Error::NotK3Shape("unexpected atom structure".into())),
        }
    }

    pub fn shape_tag(&self) -> Result<Shape> {
        Ok(self.shape()?.0)
    }

    fn monomial_text(&self, i: usize, sep: &str) -> String {
        let mut parts = Vec::new();
        for j in 0..self.n() {
            let e = self.exponent(i, j);
            if e == 1 {
                parts.push(self.names[j].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.names[j], e));
            }
        }
        parts.join(sep)
    }

    /// The `f` part of `x^2 - f` written compactly, e.g. `y^3z+z^9w+w^10`.
    pub fn f_text(&self) -> String {
        let x = self.names.iter().position(|v| v == "x");
        (0..self.n())
            .filter(|&i| match x {
                Some(x) => !(self.exponent(i, x) == 2 && (0..self.n()).all(|j| j == x || self.exponent(i, j) == 0)),
                None => true,
            })
            .map(|i| self.monomial_text(i, ""))
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Renames variables by `perm` (new variable `k` is old variable `perm[k]`).
    pub fn permute_variables(&self, perm: &[usize]) -> Potential {
        let n = self.n();
        let mut a = IntMatrix::zeros(n, n);
        for i in 0..n {
            for (k, &old) in perm.iter().enumerate() {
                a[(i, k)] = self.exponents[(i, old)].clone();
            }
        }
        Potential { names: self.names.clone(), exponents: a }
    }

    /// Key identifying the potential up to monomial order and permutations of
    /// the variables other than the first that preserve `weights`.
    /// Variables are first sorted by decreasing weight.
    pub fn canonical_key(&self, weights: &[i64]) -> (Vec<i64>, Vec<Vec<i64>>) {
        let n = self.n();
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(weights[i]));
        let sorted_w: Vec<i64> = std::iter::once(weights[0]).chain(order.iter().map(|&i| weights[i])).collect();
        let base: Vec<usize> = std::iter::once(0).chain(order.iter().copied()).collect();
        let mut best: Option<Vec<Vec<i64>>> = None;
        for perm in permutations(n - 1) {
            let p: Vec<usize> = std::iter::once(0).chain(perm.iter().map(|&k| k + 1)).collect();
            if (0..n).any(|k| sorted_w[p[k]] != sorted_w[k]) {
                continue;
            }
            let full: Vec<usize> = p.iter().map(|&k| base[k]).collect();
            let mut rows: Vec<Vec<i64>> =
                (0..n).map(|i| full.iter().map(|&j| self.exponent(i, j)).collect()).collect();
            rows.sort();
            if best.as_ref().is_none_or(|b| rows < *b) {
                best = Some(rows);
            }
        }
        (sorted_w, best.unwrap_or_default())
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..self.n()).map(|i| self.monomial_text(i, "*")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn parse_monomial(term: &str) -> Result<Vec<(String, i64)>> {
    let chars: Vec<char> = term.chars().collect();
    let mut i = 0;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            return Err(Error::Parse(format!("unexpected '{c}' in {term}")));
        }
        let mut name = c.to_string();
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            name.push(chars[i]);
            i += 1;
        }
        let mut e = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            e = s.parse().map_err(|_| Error::Parse(format!("bad exponent in {term}")))?;
        }
        out.push((name, e));
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("constant term {term}")));
    }
    Ok(out)
}

fn assign_owners(
    options: &[Vec<(usize, Option<usize>)>],
    row: usize,
    chosen: &mut [(usize, Option<usize>)],
    used: &mut [bool],
) -> bool {
    if row == options.len() {
        return true;
    }
    for &(own, p) in &options[row] {
        if used[own] {
            continue;
        }
        used[own] = true;
        chosen[row] = (own, p);
        if assign_owners(options, row + 1, chosen, used) {
            return true;
        }
        used[own] = false;
    }
    false
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Fermat,
    Chain,
    Loop,
}

/// One atomic summand. `vars[i]` carries exponent `exponents[i]`; in a chain
/// or loop, monomial `i` is `vars[i]^exponents[i] * vars[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub vars: Vec<usize>,
    pub exponents: Vec<i64>,
}

impl Atom {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Order of the diagonal symmetry group of the atom.
    pub fn order(&self) -> BigInt {
        let prod: BigInt = self.exponents.iter().map(|&a| int(a)).product();
        match self.kind {
            AtomKind::Fermat | AtomKind::Chain => prod,
            AtomKind::Loop => {
                let n = self.len();
                if n % 2 == 1 {
                    prod + 1
                } else {
                    prod - 1
                }
            }
        }
    }

    /// Generator of the atom's symmetry group, one entry per variable of the atom.
    pub fn generator(&self) -> Vec<BigRational> {
        let n = self.len();
        let a: Vec<BigInt> = self.exponents.iter().map(|&x| int(x)).collect();
        let sign = |k: usize| if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let out: Vec<BigRational> = match self.kind {
            AtomKind::Fermat => vec![BigRational::new(BigInt::one(), a[0].clone())],
            AtomKind::Chain => (1..=n)
                .map(|i| {
                    let den: BigInt = a[i - 1..].iter().product();
                    BigRational::new(sign(n + i), den)
                })
                .collect(),
            AtomKind::Loop => {
                let gamma = self.order();
                (1..=n)
                    .map(|i| {
                        if i == 1 {
                            BigRational::new(sign(n), gamma.clone())
                        } else {
                            let num: BigInt = a[..i - 1].iter().product();
                            BigRational::new(sign(n + 1 - i) * num, gamma.clone())
                        }
                    })
                    .collect()
            }
        };
        out.into_iter().map(|x| crate::linalg::frac(&x)).collect()
    }

    /// Exponent rows of the atom, as (row over all `n` variables).
    pub fn rows(&self, n: usize) -> Vec<Vec<i64>> {
        let k = self.len();
        (0..k)
            .map(|i| {
                let mut r = vec![0; n];
                r[self.vars[i]] = self.exponents[i];
                match self.kind {
                    AtomKind::Fermat => {}
                    AtomKind::Chain => {
                        if i + 1 < k {
                            r[self.vars[i + 1]] += 1;
                        }
                    }
                    AtomKind::Loop => r[self.vars[(i + 1) % k]] += 1,
                }
                r
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicDecomposition {
    pub atoms: Vec<Atom>,
}

impl AtomicDecomposition {
    /// Exponent matrix rebuilt from the atoms, rows in atom order.
    pub fn reassemble(&self, n: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.atoms.iter().flat_map(|a| a.rows(n)).collect();
        IntMatrix::from_i64_rows(&rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeData {
    pub q: Vec<BigRational>,
    pub d: i64,
    pub w: Vec<i64>,
}

impl ChargeData {
    pub fn is_calabi_yau(&self) -> bool {
        self.q.iter().fold(BigRational::zero(), |s, x| s + x).is_one()
    }
}

/// The five shapes of `x^2 - f(y,z,w)` up to permutation of y, z, w.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Fermat,
    Loop,
    LoopFermat,
    ChainFermat,
    Chain,
}

impl Shape {
    pub const ALL: [Shape; 5] = [Shape::Fermat, Shape::Loop, Shape::LoopFermat, Shape::ChainFermat, Shape::Chain];

    pub fn tag(self) -> &'static str {
        match self {
            Shape::Chain => "chain",
            Shape::Loop => "loop",
            Shape::Fermat => "fermat",
            Shape::ChainFermat => "chain+fermat",
            Shape::LoopFermat => "loop+fermat",
        }
    }

    /// Number of the table listing this shape.
    pub fn table(self) -> u8 {
        match self {
            Shape::Fermat => 1,
            Shape::Loop => 2,
            Shape::LoopFermat => 3,
            Shape::ChainFermat => 4,
            Shape::Chain => 5,
        }
    }

    pub fn from_table(t: u8) -> Option<Shape> {
        Shape::ALL.into_iter().find(|s| s.table() == t)
    }

    /// Monomials of `f` as (own variable, pointer variable) over y, z, w = 0, 1, 2.
    pub fn pattern(self) -> [(usize, Option<usize>); 3] {
        match self {
            Shape::Chain => [(0, Some(1)), (1, Some(2)), (2, None)],
            Shape::Loop => [(0, Some(1)), (1, Some(2)), (2, Some(0))],
            Shape::Fermat => [(0, None), (1, None), (2, None)],
            Shape::ChainFermat => [(0, Some(1)), (1, None), (2, None)],
            Shape::LoopFermat => [(0, Some(1)), (1, Some(0)), (2, None)],
        }
    }

    /// The potential `x^2 + f` of this shape with exponents `a`.
    pub fn potential(self, a: [i64; 3]) -> Potential {
        let mut rows = vec![vec![2, 0, 0, 0]];
        for (k, (own, ptr)) in self.pattern().into_iter().enumerate() {
            let mut r = vec![0; 4];
            r[1 + own] = a[k];
            if let Some(p) = ptr {
                r[1 + p] += 1;
            }
            rows.push(r);
        }
        Potential::from_rows(&rows).expect("square exponent matrix")
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn parse_and_print() {
        let p = Potential::parse("x^2 - y^3*z - z^9*w - w^10").unwrap();
        assert_eq!(p.monomials(), vec![vec![2, 0, 0, 0], vec![0, 3, 1, 0], vec![0, 0, 9, 1], vec![0, 0, 0, 10]]);
        assert_eq!(p.to_string(), "x^2 + y^3*z + z^9*w + w^10");
        assert_eq!(Potential::parse(&p.to_string()).unwrap(), p);
        assert_eq!(p.f_text(), "y^3z+z^9w+w^10");
        let q = Potential::parse_k3("z^7+zy^3+yw^10").unwrap();
        assert_eq!(q.monomial(2), vec![0, 3, 1, 0]);
    }

    #[test]
    fn parse_indexed_variables() {
        let p = Potential::parse("x1^5*x2 + x2^2*x3 + x3^3*x4 + x4^9").unwrap();
        assert_eq!(p.names(), &["x1", "x2", "x3", "x4"]);
        assert_eq!(p.charges().unwrap().w, vec![7, 19, 16, 6]);
    }

    #[test]
    fn parse_errors() {
        assert!(Potential::parse("x^2 + y^3 + y^2").is_err());
        assert!(Potential::parse("x^2 + 3").is_err());
    }

    #[test]
    fn fermat_decomposition() {
        let p = Potential::parse("x^2 - y^6 - z^6 - w^6").unwrap();
        let d = p.atomic_decomposition().unwrap();
        assert_eq!(d.atoms.len(), 4);
        assert!(d.atoms.iter().all(|a| a.kind == AtomKind::Fermat));
        assert_eq!(d.atoms.iter().map(|a| a.exponents[0]).collect::<Vec<_>>(), vec![2, 6, 6, 6]);
        assert_eq!(p.shape().unwrap(), (Shape::Fermat, [6, 6, 6]));
    }

    #[test]
    fn chain_decomposition() {
        let p = Potential::parse_k3("y^3z+z^9w+w^10").unwrap();
        let d = p.atomic_decomposition().unwrap();
        assert_eq!(d.atoms[1], Atom { kind: AtomKind::Chain, vars: vec![1, 2, 3], exponents: vec![3, 9, 10] });
        assert_eq!(p.shape().unwrap(), (Shape::Chain, [3, 9, 10]));
    }

    #[test]
    fn loop_decomposition() {
        let p = Potential::parse_k3("y^3z+z^7w+w^9y").unwrap();
        let d = p.atomic_decomposition().unwrap();
        assert_eq!(d.atoms[1], Atom { kind: AtomKind::Loop, vars: vec![1, 2, 3], exponents: vec![3, 7, 9] });
        assert_eq!(p.shape().unwrap().0, Shape::Loop);
    }

    #[test]
    fn not_atomic() {
        let p = Potential::parse("x^2 + y^3*z*w + z^5 + w^5").unwrap();
        assert!(matches!(p.atomic_decomposition(), Err(Error::NotAtomicSum(_))));
        let p = Potential::parse("x^2 + y^3*z + w^3*z + z^5").unwrap();
        assert!(matches!(p.atomic_decomposition(), Err(Error::NotAtomicSum(_))));
        let p = Potential::parse("y^6 + z^6 + w^6").unwrap();
        assert!(matches!(p.shape(), Err(Error::NotK3Shape(_))));
    }

    #[test]
    fn charges_examples() {
        let p = Potential::parse("x^2 - y^6 - z^6 - w^6").unwrap();
        let c = p.charges().unwrap();
        assert_eq!(c.q, vec![rat(1, 2), rat(1, 6), rat(1, 6), rat(1, 6)]);
        assert_eq!((c.d, c.w.clone()), (6, vec![3, 1, 1, 1]));
        assert!(c.is_calabi_yau());
        let p = Potential::parse_k3("y^3z+z^9w+w^10").unwrap();
        assert_eq!(p.charges().unwrap().w, vec![5, 3, 1, 1]);
    }

    #[test]
    fn transpose_examples() {
        let p = Potential::parse_k3("y^3z+z^9w+w^10").unwrap();
        let c = p.transpose().charges().unwrap();
        assert_eq!((c.d, c.w), (54, vec![27, 18, 4, 5]));
        let r = Potential::parse("x1^5*x2 + x2^2*x3 + x3^3*x4 + x4^9").unwrap();
        assert_eq!(r.transpose().charges().unwrap().w, vec![9, 18, 9, 4]);
        let f = Potential::parse("x^2 - y^6 - z^6 - w^6").unwrap();
        assert_eq!(f.transpose(), f);
    }

    #[test]
    fn atomic_generators() {
        let chain = Atom { kind: AtomKind::Chain, vars: vec![0, 1, 2], exponents: vec![3, 9, 10] };
        assert_eq!(chain.order(), int(270));
        assert_eq!(chain.generator(), vec![rat(1, 270), rat(89, 90), rat(1, 10)]);
        let lp = Atom { kind: AtomKind::Loop, vars: vec![0, 1, 2], exponents: vec![3, 7, 9] };
        assert_eq!(lp.order(), int(190));
        let f2 = Atom { kind: AtomKind::Fermat, vars: vec![0], exponents: vec![2] };
        assert_eq!(f2.generator(), vec![rat(1, 2)]);
    }

    #[test]
    fn shape_builder_roundtrip() {
        for s in Shape::ALL {
            let p = s.potential([3, 4, 5]);
            if p.is_invertible() {
                assert_eq!(p.shape().unwrap(), (s, [3, 4, 5]));
            }
        }
    }

    #[test]
    fn canonical_key_merges_permutations() {
        let a = Potential::parse_k3("y^3w+w^11y+z^8").unwrap();
        let wa = a.charges().unwrap().w;
        let b = Potential::parse_k3("z^3y+y^11z+w^8").unwrap();
        let wb = b.charges().unwrap().w;
        assert_ne!(wa, wb);
        assert_eq!(a.canonical_key(&wa), b.canonical_key(&wb));
    }
}
