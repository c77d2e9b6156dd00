//! Integral lattices, 2-elementary invariants and the admissible Nikulin triples.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::AbelianStructure;
use crate::linalg::{column_hermite_form, int, smith_normal_form, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: IntMatrix,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if gram != gram.transpose() {
            return Err(Error::Consistency("Gram matrix is not symmetric".into()));
        }
        Ok(IntegralLattice { gram })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows))
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        IntegralLattice { gram: IntMatrix::diagonal(&entries.iter().map(|&x| int(x)).collect::<Vec<_>>()) }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut g = IntMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[(n + i, n + j)] = other.gram[(i, j)].clone();
            }
        }
        IntegralLattice { gram: g }
    }

    /// The lattice with form scaled by `m`.
    pub fn twist(&self, m: i64) -> IntegralLattice {
        let mut g = self.gram.clone();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                g[(i, j)] = &g[(i, j)] * int(m);
            }
        }
        IntegralLattice { gram: g }
    }

    pub fn product(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn discriminant_group(&self) -> Result<AbelianStructure> {
        if self.det().is_zero() {
            return Err(Error::Degenerate);
        }
        let snf = smith_normal_form(&self.gram);
        Ok(AbelianStructure { factors: snf.invariant_factors().into_iter().filter(|x| !x.is_one()).collect() })
    }

    fn check_two_elementary(&self) -> Result<AbelianStructure> {
        let a = self.discriminant_group()?;
        if a.factors.iter().any(|f| f != &int(2)) {
            return Err(Error::NotTwoElementary(a.factors.iter().map(|f| f.to_string()).collect()));
        }
        Ok(a)
    }

    /// Number of `Z/2` summands of the discriminant group.
    pub fn two_elementary_a(&self) -> Result<i64> {
        Ok(self.check_two_elementary()?.factors.len() as i64)
    }

    /// `0` iff every vector of the dual lattice has integral square.
    pub fn delta(&self) -> Result<u8> {
        self.check_two_elementary()?;
        let inv = self.gram.to_rational().inverse().map_err(|_| Error::Degenerate)?;
        let two = BigRational::from_integer(int(2));
        for i in 0..self.rank() {
            if !inv[(i, i)].is_integer() {
                return Ok(1);
            }
            for j in 0..self.rank() {
                if i != j && !(&inv[(i, j)] * &two).is_integer() {
                    return Ok(1);
                }
            }
        }
        Ok(0)
    }

    /// Overlattice generated by the lattice and the vectors `v/2`. Fails when
    /// the extended form is not integral.
    pub fn glue_half_classes(&self, vs: &[Vec<BigInt>]) -> Result<IntegralLattice> {
        let n = self.rank();
        let mut cols: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(2) } else { BigInt::zero() }).collect())
            .collect();
        for v in vs {
            if v.len() != n {
                return Err(Error::Consistency("glue vector length".into()));
            }
            cols.push(v.clone());
        }
        // basis of the overlattice, scaled by two
        let h = column_hermite_form(&IntMatrix::from_columns(n, &cols));
        if h.cols() != n {
            return Err(Error::Degenerate);
        }
        let g2 = h.transpose().mul(&self.gram).mul(&h);
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v: &BigInt = &g2[(i, j)];
                if !v.is_multiple_of(&int(4)) {
                    return Err(Error::NotIntegralOverlattice(format!("entry {v}/4")));
                }
                g[(i, j)] = v / 4;
            }
        }
        Ok(IntegralLattice { gram: g })
    }

    /// `(n_+, n_-, n_0)` by symmetric Gaussian elimination over the rationals.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut m = self.gram.to_rational();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut k = 0;
        while k < n {
            if m[(k, k)].is_zero() {
                if let Some(p) = (k + 1..n).find(|&i| !m[(i, i)].is_zero()) {
                    m.swap_rows(k, p);
                    m.swap_cols(k, p);
                } else if let Some(p) = (k + 1..n).find(|&i| !m[(k, i)].is_zero()) {
                    // e_k + e_p has nonzero square 2 m_kp
                    for j in 0..n {
                        let v = m[(p, j)].clone();
                        m[(k, j)] += v;
                    }
                    for i in 0..n {
                        let v = m[(i, p)].clone();
                        m[(i, k)] += v;
                    }
                } else {
                    zero += 1;
                    k += 1;
                    continue;
                }
            }
            let piv = m[(k, k)].clone();
            if piv.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &piv;
                for j in 0..n {
                    let v = &f * &m[(k, j)];
                    m[(i, j)] -= v;
                }
                for j in 0..n {
                    let v = &f * &m[(j, k)];
                    m[(j, i)] -= v;
                }
            }
            k += 1;
        }
        (pos, neg, zero)
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.gram)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NikulinTriple {
    pub r: i64,
    pub a: i64,
    pub delta: u8,
}

impl NikulinTriple {
    pub fn new(r: i64, a: i64, delta: u8) -> Self {
        NikulinTriple { r, a, delta }
    }

    pub fn g(&self) -> i64 {
        (22 - self.r - self.a) / 2
    }

    pub fn k(&self) -> i64 {
        (self.r - self.a) / 2
    }

    pub fn is_admissible(&self) -> bool {
        admissible_triples().contains(self)
    }

    /// `(r, a, delta) -> (20 - r, a, delta)`, under the hypotheses
    /// `(r, a, delta) != (14, 6, 0)` and `g >= 1`.
    pub fn dv_mirror(&self) -> Result<NikulinTriple> {
        if (self.r, self.a, self.delta) == (14, 6, 0) || self.g() < 1 {
            return Err(Error::MirrorHypothesisFails((self.r, self.a, self.delta)));
        }
        Ok(NikulinTriple { r: 20 - self.r, a: self.a, delta: self.delta })
    }
}

impl fmt::Display for NikulinTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.a, self.delta)
    }
}

/// `a = 22 - r - 2g`.
pub fn invariant_a(r: i64, g: i64) -> Result<i64> {
    let a = 22 - r - 2 * g;
    if a < 0 || g < 0 {
        return Err(Error::OutOfRange(format!("r = {r}, g = {g}")));
    }
    Ok(a)
}

#[derive(Deserialize)]
struct TripleRecord {
    r: i64,
    a: i64,
    delta: u8,
    g: i64,
    k: i64,
}

#[derive(Deserialize)]
struct TripleFile {
    triples: Vec<TripleRecord>,
}

pub const NIKULIN_TRIPLES_JSON: &str = include_str!("../../../data/nikulin_triples.json");

/// The admissible triples, with their `(g, k)` labels checked on load.
pub fn admissible_triples() -> &'static [NikulinTriple] {
    static CELL: OnceLock<Vec<NikulinTriple>> = OnceLock::new();
    CELL.get_or_init(|| {
        let file: TripleFile = serde_json::from_str(NIKULIN_TRIPLES_JSON).expect("nikulin_triples.json parses");
        file.triples
            .iter()
            .map(|t| {
                let nt = NikulinTriple::new(t.r, t.a, t.delta);
                assert_eq!((nt.g(), nt.k()), (t.g, t.k), "labels of {nt}");
                assert!((22 - t.r - t.a) % 2 == 0 && t.a <= t.r && t.a <= 22 - t.r, "{nt}");
                nt
            })
            .collect()
    })
}

/// The unique delta making `(r, a, delta)` admissible, if only one does.
pub fn forced_delta(r: i64, a: i64) -> Option<u8> {
    let ds: Vec<u8> = admissible_triples().iter().filter(|t| t.r == r && t.a == a).map(|t| t.delta).collect();
    match ds.as_slice() {
        [d] => Some(*d),
        _ => None,
    }
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn to_i64s(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("fits in i64")).collect()
}
