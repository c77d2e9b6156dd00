//! Complete toric surfaces: fans of (fake) weighted projective planes,
//! Hirzebruch-Jung resolution, Picard lattices and point blow-ups.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groups::Symmetry;
use crate::linalg::{column_hermite_form, int, primitive_extension, IntMatrix, RatMatrix};

pub type Ray = [i64; 2];

pub fn det2(u: Ray, v: Ray) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

pub fn primitive(u: Ray) -> Ray {
    let g = u[0].gcd(&u[1]);
    [u[0] / g, u[1] / g]
}

fn half(u: Ray) -> u8 {
    if u[1] > 0 || (u[1] == 0 && u[0] > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order from the positive x-axis.
pub fn angle_cmp(u: Ray, v: Ray) -> Ordering {
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&det2(u, v)))
}

/// Rays in counterclockwise order, starting from the lexicographically
/// smallest ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<Ray>,
}

impl Fan2D {
    pub fn new(rays: &[Ray]) -> Result<Self> {
        let mut rs: Vec<Ray> = rays.iter().map(|&u| primitive(u)).collect();
        rs.sort_by(|&a, &b| angle_cmp(a, b));
        rs.dedup();
        if rs.len() != rays.len() || rs.len() < 3 {
            return Err(Error::Consistency(format!("rays {rays:?} are not distinct primitive directions")));
        }
        let n = rs.len();
        for i in 0..n {
            if det2(rs[i], rs[(i + 1) % n]) <= 0 {
                return Err(Error::Consistency(format!("fan on {rays:?} is not complete")));
            }
        }
        let start = (0..n).min_by_key(|&i| rs[i]).unwrap();
        rs.rotate_left(start);
        Ok(Fan2D { rays: rs })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_smooth(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| det2(self.rays[i], self.rays[(i + 1) % n]) == 1)
    }

    /// Minimal resolution: Hirzebruch-Jung subdivision of every cone.
    pub fn resolve(&self) -> SmoothToricSurface {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (u, v) = (self.rays[i], self.rays[(i + 1) % n]);
            out.push(u);
            out.extend(hirzebruch_jung(u, v));
        }
        SmoothToricSurface::new(out).expect("subdivision is smooth")
    }
}

/// Rays strictly inside the cone `(u, v)` of the minimal resolution.
pub fn hirzebruch_jung(u: Ray, v: Ray) -> Vec<Ray> {
    let mut out = Vec::new();
    let mut u = u;
    let mut m = det2(u, v);
    while m > 1 {
        let b = (0..m).find(|&b| (v[0] + b * u[0]) % m == 0 && (v[1] + b * u[1]) % m == 0).expect("cone parameter");
        let w = [(v[0] + b * u[0]) / m, (v[1] + b * u[1]) / m];
        out.push(w);
        u = w;
        m = det2(u, v);
    }
    out
}

/// A smooth complete toric surface given by its cyclically ordered rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothToricSurface {
    rays: Vec<Ray>,
}

impl SmoothToricSurface {
    /// Rays in counterclockwise cyclic order; consecutive rays must form a
    /// lattice basis.
    pub fn new(rays: Vec<Ray>) -> Result<Self> {
        let n = rays.len();
        if n < 3 || (0..n).any(|i| det2(rays[i], rays[(i + 1) % n]) != 1) {
            return Err(Error::Consistency(format!("{rays:?} is not a smooth complete fan")));
        }
        Ok(SmoothToricSurface { rays })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn picard_rank(&self) -> usize {
        self.len() - 2
    }

    /// `b_i` with `u_{i-1} + u_{i+1} = b_i u_i`; the self-intersection is `-b_i`.
    pub fn b_values(&self) -> Vec<i64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let (p, u, q) = (self.rays[(i + n - 1) % n], self.rays[i], self.rays[(i + 1) % n]);
                let s = [p[0] + q[0], p[1] + q[1]];
                let b = if u[0] != 0 { s[0] / u[0] } else { s[1] / u[1] };
                debug_assert_eq!([b * u[0], b * u[1]], s);
                b
            })
            .collect()
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        self.b_values().into_iter().map(|b| -b).collect()
    }

    /// Intersection number of the toric divisors `i` and `j`.
    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        let n = self.len();
        if i == j {
            return -self.b_values()[i];
        }
        let adj = (i + 1) % n == j || (j + 1) % n == i;
        i64::from(adj)
    }

    /// Gram matrix on the basis `basis` of toric divisors and the class of
    /// every toric divisor in that basis (one column per ray).
    pub fn picard_data(&self, basis: &[usize]) -> Result<(IntMatrix, IntMatrix)> {
        let n = self.len();
        let rest: Vec<usize> = (0..n).filter(|i| !basis.contains(i)).collect();
        if basis.len() != n - 2 || rest.len() != 2 {
            return Err(Error::BasisNotSpanning(format!("{basis:?}")));
        }
        let (p, q) = (self.rays[rest[0]], self.rays[rest[1]]);
        let d = det2(p, q);
        if d.abs() != 1 {
            return Err(Error::BasisNotSpanning(format!("complement rays {p:?}, {q:?} have determinant {d}")));
        }
        // dual basis: <mp, p> = 1, <mp, q> = 0 and likewise for mq
        let mp = [q[1] * d, -q[0] * d];
        let mq = [-p[1] * d, p[0] * d];
        let dot = |m: [i64; 2], u: Ray| m[0] * u[0] + m[1] * u[1];
        let k = basis.len();
        let mut classes = IntMatrix::zeros(k, n);
        for i in 0..n {
            if let Some(pos) = basis.iter().position(|&b| b == i) {
                classes[(pos, i)] = int(1);
            } else {
                let m = if i == rest[0] { mp } else { mq };
                for (pos, &j) in basis.iter().enumerate() {
                    classes[(pos, i)] = int(-dot(m, self.rays[j]));
                }
            }
        }
        let mut gram = IntMatrix::zeros(k, k);
        for (a, &i) in basis.iter().enumerate() {
            for (b, &j) in basis.iter().enumerate() {
                gram[(a, b)] = int(self.intersection(i, j));
            }
        }
        Ok((gram, classes))
    }

    /// Picard data on the last `n - 2` rays.
    pub fn default_picard_data(&self) -> (IntMatrix, IntMatrix) {
        let basis: Vec<usize> = (2..self.len()).collect();
        self.picard_data(&basis).expect("consecutive rays span")
    }
}

/// Curve classes on a smooth rational surface, in a fixed basis of `Pic`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceClasses {
    pub gram: IntMatrix,
    pub curves: Vec<Vec<BigInt>>,
}

impl SurfaceClasses {
    /// Blows up one point per entry of `points`, each listing the curves
    /// through it. Every new exceptional class has square `-1` and is
    /// subtracted from the curves through its point.
    pub fn blow_up_points(&self, points: &[Vec<usize>]) -> SurfaceClasses {
        let k = self.gram.rows();
        let n = k + points.len();
        let mut gram = IntMatrix::zeros(n, n);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        for t in 0..points.len() {
            gram[(k + t, k + t)] = int(-1);
        }
        let mut curves: Vec<Vec<BigInt>> = self
            .curves
            .iter()
            .map(|c| c.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), points.len())).collect())
            .collect();
        for (t, through) in points.iter().enumerate() {
            for &c in through {
                curves[c][k + t] -= 1;
            }
        }
        SurfaceClasses { gram, curves }
    }

    pub fn product(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }
}

/// `M` in `GL(2, Z)` (rows) carrying the rays of `a` onto those of `b`.
pub fn fan_equivalence(a: &[Ray], b: &[Ray]) -> Option<[[i64; 2]; 2]> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let fa = Fan2D::new(a).ok()?;
    let fb = Fan2D::new(b).ok()?;
    let (ra, rb) = (fa.rays(), fb.rays());
    let n = ra.len();
    let (u0, u1) = (ra[0], ra[1]);
    let du = det2(u0, u1);
    let target: std::collections::BTreeSet<Ray> = rb.iter().copied().collect();
    for i in 0..n {
        for step in [1, n - 1] {
            let (v0, v1) = (rb[i], rb[(i + step) % n]);
            // M u0 = v0, M u1 = v1: M = V U^{-1}
            let num = [
                [v0[0] * u1[1] - v1[0] * u0[1], -v0[0] * u1[0] + v1[0] * u0[0]],
                [v0[1] * u1[1] - v1[1] * u0[1], -v0[1] * u1[0] + v1[1] * u0[0]],
            ];
            if num.iter().flatten().any(|x| x % du != 0) {
                continue;
            }
            let m = [[num[0][0] / du, num[0][1] / du], [num[1][0] / du, num[1][1] / du]];
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() != 1 {
                continue;
            }
            let image: std::collections::BTreeSet<Ray> =
                ra.iter().map(|u| [m[0][0] * u[0] + m[0][1] * u[1], m[1][0] * u[0] + m[1][1] * u[1]]).collect();
            if image == target {
                return Some(m);
            }
        }
    }
    None
}

/// The toric surface `P(w2, w3, w4) / G` with `N = (Z^3 + images of G) / Q w`.
/// Coordinates on `N` come from a unimodular `U` with `U w = e1` followed by
/// a Hermite basis of the image lattice.
#[derive(Clone, Debug)]
pub struct ToricPlane {
    pub weights: [i64; 3],
    /// Ray of the divisor `{x_i = 0}` for each of the three coordinates.
    pub coordinate_rays: [Ray; 3],
    /// `pairing[i][k]`: value of the character `e_i` on the `k`-th basis vector of `N`.
    pairing: RatMatrix,
}

impl ToricPlane {
    /// `gens` are symmetries of the three plane coordinates.
    pub fn new(weights: [i64; 3], gens: &[Vec<BigRational>]) -> Result<Self> {
        let w: Vec<BigInt> = weights.iter().map(|&x| int(x)).collect();
        let u = primitive_extension(&w)?;
        let uq = u.to_rational();
        let proj = |v: &[BigRational]| -> Vec<BigRational> {
            let x = uq.mul_vec(v);
            vec![x[1].clone(), x[2].clone()]
        };
        let unit = |k: usize| -> Vec<BigRational> {
            (0..3).map(|i| BigRational::from_integer(int(i64::from(i == k)))).collect()
        };
        let mut vecs: Vec<Vec<BigRational>> = (0..3).map(|k| proj(&unit(k))).collect();
        for g in gens {
            vecs.push(proj(g));
        }
        let den = crate::linalg::common_denominator(&vecs.iter().flatten().cloned().collect::<Vec<_>>());
        let dq = BigRational::from_integer(den.clone());
        let cols: Vec<Vec<BigInt>> = vecs.iter().map(|v| v.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
        let h = column_hermite_form(&IntMatrix::from_columns(2, &cols));
        if h.cols() != 2 {
            return Err(Error::Consistency("image lattice has rank < 2".into()));
        }
        let b = h.to_rational().scale(&BigRational::new(1.into(), den));
        let bi = b.inverse()?;
        let mut coordinate_rays = [[0i64; 2]; 3];
        for k in 0..3 {
            let c = bi.mul_vec(&vecs[k]);
            let c: Vec<i64> = c.iter().map(|x| x.to_integer().to_i64().expect("small ray")).collect();
            coordinate_rays[k] = primitive([c[0], c[1]]);
        }
        // lift of N-coordinates to Q^3: U^{-1} (0, B y)
        let ui = uq.inverse()?;
        let mut lift = RatMatrix::zeros(3, 2);
        for i in 0..3 {
            for k in 0..2 {
                let mut s = BigRational::zero();
                for j in 0..2 {
                    s += &ui[(i, j + 1)] * &b[(j, k)];
                }
                lift[(i, k)] = s;
            }
        }
        Ok(ToricPlane { weights, coordinate_rays, pairing: lift })
    }

    pub fn from_symmetries(weights: [i64; 3], gens: &[Symmetry]) -> Result<Self> {
        let g: Vec<Vec<BigRational>> = gens.iter().map(|s| s.entries()[1..].to_vec()).collect();
        Self::new(weights, &g)
    }

    /// `<m, u>` for a degree-zero exponent vector `m` on `y, z, w`.
    pub fn pair(&self, m: &[i64; 3], u: Ray) -> i64 {
        let mut s = BigRational::zero();
        for (i, &mi) in m.iter().enumerate() {
            for (k, &uk) in u.iter().enumerate() {
                s += &self.pairing[(i, k)] * BigRational::from_integer(int(mi * uk));
            }
        }
        assert!(s.is_integer(), "character {m:?} does not pair integrally with {u:?}");
        s.to_integer().to_i64().expect("small pairing")
    }

    pub fn fan(&self) -> Fan2D {
        Fan2D::new(&self.coordinate_rays).expect("weighted plane fan is complete")
    }
}

/// The fan of `P(w2, w3, w4)`.
pub fn wps_plane_fan(w: [i64; 3]) -> Result<Fan2D> {
    Ok(ToricPlane::new(w, &[])?.fan())
}
