//! Antipodally symmetric quadrature rules on S².

use std::f64::consts::PI;

use crate::error::{Error, Result};

const FOUR_PI: f64 = 4.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    degree: usize,
    /// `(i, j)` with `ω_j = -ω_i`, `i < j`, in ascending `i`
    pairs: Vec<(usize, usize)>,
}

/// Octahedral orbit generators `(kind, parameter, weight)` with weights
/// normalized to total 1.
#[derive(Clone, Copy)]
enum Orbit {
    A1(f64),
    A2(f64),
    A3(f64),
    /// `(l, l, sqrt(1-2l²))`
    B(f64, f64),
    /// `(p, sqrt(1-p²), 0)`
    C(f64, f64),
}

const LEBEDEV_6: &[Orbit] = &[Orbit::A1(1.0 / 6.0)];
const LEBEDEV_14: &[Orbit] = &[Orbit::A1(1.0 / 15.0), Orbit::A3(3.0 / 40.0)];
const LEBEDEV_26: &[Orbit] = &[
    Orbit::A1(1.0 / 21.0),
    Orbit::A2(4.0 / 105.0),
    Orbit::A3(9.0 / 280.0),
];
const LEBEDEV_86: &[Orbit] = &[
    Orbit::A1(0.1154401154401154e-1),
    Orbit::A3(0.1194390908585628e-1),
    Orbit::B(0.3696028464541502, 0.1111055571060340e-1),
    Orbit::B(0.6943540066026664, 0.1187650129453714e-1),
    Orbit::C(0.3742430390903412, 0.1181230374690448e-1),
];

fn orbit_points(base: [f64; 3]) -> Vec<[f64; 3]> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out: Vec<[f64; 3]> = Vec::new();
    for p in PERMS {
        for signs in 0..8 {
            let mut v = [0.0; 3];
            for d in 0..3 {
                let s = if signs >> d & 1 == 1 { -1.0 } else { 1.0 };
                v[d] = s * base[p[d]];
            }
            if !out.iter().any(|w| (0..3).all(|d| (w[d] - v[d]).abs() < 1e-14)) {
                out.push(v);
            }
        }
    }
    out
}

impl Orbit {
    fn expand(self) -> (Vec<[f64; 3]>, f64) {
        let (base, w) = match self {
            Orbit::A1(w) => ([1.0, 0.0, 0.0], w),
            Orbit::A2(w) => ([0.0, 0.5f64.sqrt(), 0.5f64.sqrt()], w),
            Orbit::A3(w) => {
                let c = 1.0 / 3f64.sqrt();
                ([c, c, c], w)
            }
            Orbit::B(l, w) => ([l, l, (1.0 - 2.0 * l * l).sqrt()], w),
            Orbit::C(p, w) => ([p, (1.0 - p * p).sqrt(), 0.0], w),
        };
        (orbit_points(base), w)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

impl SphereQuadrature {
    /// Builds a rule from nodes and weights; nodes are normalized and weights
    /// rescaled to total `4π`. The node set must be antipodally symmetric with
    /// equal weights on antipodes.
    pub fn from_nodes(nodes: Vec<[f64; 3]>, weights: Vec<f64>, degree: usize) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidArgument("quadrature needs matching nonempty nodes and weights".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidArgument("quadrature weights must be positive".into()));
        }
        let nodes: Vec<[f64; 3]> = nodes
            .into_iter()
            .map(|v| {
                let r = crate::grid::norm3(v);
                [v[0] / r, v[1] / r, v[2] / r]
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w * FOUR_PI / total).collect();

        let mut partner = vec![usize::MAX; nodes.len()];
        for i in 0..nodes.len() {
            if partner[i] != usize::MAX {
                continue;
            }
            let j = (0..nodes.len())
                .find(|&j| j != i && (0..3).all(|d| (nodes[j][d] + nodes[i][d]).abs() < 1e-9))
                .ok_or_else(|| Error::InvalidArgument(format!("node {i} has no antipode")))?;
            if (weights[i] - weights[j]).abs() > 1e-12 * weights[i] {
                return Err(Error::InvalidArgument(format!("antipodes {i} and {j} carry different weights")));
            }
            partner[i] = j;
            partner[j] = i;
        }
        // put each antipode exactly at -ω with the identical weight
        let mut nodes = nodes;
        let mut weights = weights;
        let mut pairs = Vec::with_capacity(nodes.len() / 2);
        for i in 0..nodes.len() {
            let j = partner[i];
            if i < j {
                nodes[j] = [-nodes[i][0], -nodes[i][1], -nodes[i][2]];
                weights[j] = weights[i];
                pairs.push((i, j));
            }
        }
        Ok(Self { nodes, weights, degree, pairs })
    }

    fn from_orbits(orbits: &[Orbit], degree: usize) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for o in orbits {
            let (pts, w) = o.expand();
            weights.extend(std::iter::repeat_n(w, pts.len()));
            nodes.extend(pts);
        }
        Self::from_nodes(nodes, weights, degree).expect("built-in rule is symmetric")
    }

    /// Lebedev rules: 6 nodes (degree 3), 14 (5), 26 (7), 86 (15).
    pub fn lebedev(points: usize) -> Result<Self> {
        match points {
            6 => Ok(Self::from_orbits(LEBEDEV_6, 3)),
            14 => Ok(Self::from_orbits(LEBEDEV_14, 5)),
            26 => Ok(Self::from_orbits(LEBEDEV_26, 7)),
            86 => Ok(Self::from_orbits(LEBEDEV_86, 15)),
            _ => Err(Error::InvalidArgument(format!("no built-in Lebedev rule with {points} points"))),
        }
    }

    /// Gauss–Legendre in `cos θ` times an even trapezoid rule in `φ`.
    pub fn gauss_product(degree: usize) -> Self {
        let n = (degree + 2) / 2;
        let m = 2 * n;
        let (zs, wz) = gauss_legendre(n);
        let mut nodes = Vec::with_capacity(n * m);
        let mut weights = Vec::with_capacity(n * m);
        for (z, w) in zs.iter().zip(&wz) {
            let s = (1.0 - z * z).sqrt();
            for j in 0..m {
                let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                nodes.push([s * phi.cos(), s * phi.sin(), *z]);
                weights.push(w * 2.0 * PI / m as f64);
            }
        }
        Self::from_nodes(nodes, weights, 2 * n - 1).expect("product rule is symmetric")
    }

    /// The smallest built-in rule exact to at least `degree`.
    pub fn for_degree(degree: usize) -> Self {
        match degree {
            0..=3 => Self::lebedev(6).unwrap(),
            4..=5 => Self::lebedev(14).unwrap(),
            6..=7 => Self::lebedev(26).unwrap(),
            8..=15 => Self::lebedev(86).unwrap(),
            _ => Self::gauss_product(degree),
        }
    }

    /// Parses `ω_x ω_y ω_z w` lines; `#` starts a comment.
    pub fn from_text(text: &str, degree: usize) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if nums.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected 4 numbers", lineno + 1)));
            }
            nodes.push([nums[0], nums[1], nums[2]]);
            weights.push(nums[3]);
        }
        Self::from_nodes(nodes, weights, degree)
    }

    pub fn to_text(&self) -> String {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| format!("{:.17e} {:.17e} {:.17e} {:.17e}\n", v[0], v[1], v[2], w))
            .collect()
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn antipodal_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `Σ w_i f(ω_i)`.
    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(v, w)| w * f(*v)).sum()
    }
}
