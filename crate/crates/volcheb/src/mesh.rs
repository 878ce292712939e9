//! Mesh partitions of [0, X] and the collocation grid inside each
//! subinterval.

use crate::error::{Error, Result};

/// How breakpoints are laid out over [0, X].
#[derive(Debug, Clone, PartialEq)]
pub enum MeshScheme {
    /// x_i = i X / N
    Uniform,
    /// x_i = X (i/N)^q, exponent q >= 1. q = 1 reduces to uniform.
    Graded { q: f64 },
    /// Caller-supplied breakpoints from 0 to X, strictly increasing.
    /// Quasi-uniform meshes are expressed through this scheme.
    Explicit(Vec<f64>),
}

/// Breakpoints 0 = x_0 < x_1 < ... < x_N = X.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

/// Build a partition of [0, X] with N subintervals.
pub fn build_partition(x_end: f64, n: usize, scheme: &MeshScheme) -> Result<Partition> {
    if !(x_end > 0.0) {
        return Err(Error::InvalidMesh(format!("endpoint X = {x_end} must be positive")));
    }
    if n < 1 {
        return Err(Error::InvalidMesh("need at least one subinterval".into()));
    }
    let breakpoints = match scheme {
        MeshScheme::Uniform => (0..=n).map(|i| i as f64 * x_end / n as f64).collect(),
        MeshScheme::Graded { q } => {
            if !(*q >= 1.0) {
                return Err(Error::InvalidMesh(format!("grading exponent q = {q} must be >= 1")));
            }
            (0..=n)
                .map(|i| x_end * (i as f64 / n as f64).powf(*q))
                .collect()
        }
        MeshScheme::Explicit(points) => {
            if points.len() != n + 1 {
                return Err(Error::InvalidMesh(format!(
                    "explicit scheme supplies {} points but N = {n} needs {}",
                    points.len(),
                    n + 1
                )));
            }
            points.clone()
        }
    };
    Partition::from_breakpoints(breakpoints, x_end)
}

impl Partition {
    fn from_breakpoints(mut breakpoints: Vec<f64>, x_end: f64) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMesh("need at least one subinterval".into()));
        }
        // Pin the ends exactly; powf/scaled arithmetic may leave dust there.
        breakpoints[0] = 0.0;
        let last = breakpoints.len() - 1;
        if (breakpoints[last] - x_end).abs() > 1e-12 * x_end {
            return Err(Error::InvalidMesh(format!(
                "last breakpoint {} does not reach X = {x_end}",
                breakpoints[last]
            )));
        }
        breakpoints[last] = x_end;
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidMesh(format!(
                    "breakpoints must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn x_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Number of subintervals N.
    pub fn intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn point(&self, i: usize) -> f64 {
        self.breakpoints[i]
    }

    /// Step h_i = x_{i+1} - x_i.
    pub fn step(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    /// Mesh diameter h = max_i h_i.
    pub fn diameter(&self) -> f64 {
        (0..self.intervals())
            .map(|i| self.step(i))
            .fold(0.0, f64::max)
    }

    /// The convergence analysis assumes X <= e; the scheme itself is
    /// well-defined beyond that. Callers log a warning when this is set.
    pub fn exceeds_log_bound(&self) -> bool {
        self.x_end() > std::f64::consts::E
    }

    /// Index of the subinterval containing x (ties at interior breakpoints
    /// resolve to the left interval).
    pub fn covering_interval(&self, x: f64) -> Result<usize> {
        let x_end = self.x_end();
        if !(0.0..=x_end).contains(&x) {
            return Err(Error::OutOfInterval { x, lo: 0.0, hi: x_end });
        }
        let i = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(0) => 0,
            Ok(i) => i - 1,
            Err(i) => i - 1,
        };
        Ok(i.min(self.intervals() - 1))
    }
}

/// Collocation fractions beta_j = (1 - cos(j pi/nu))/2, j = 0..nu.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    nu: usize,
    fractions: Vec<f64>,
}

/// Build the collocation grid for a given nu >= 2.
///
/// nu = 1 is rejected: the history rule degenerates to all-zero weights
/// there, so failing loudly beats silently producing a broken rule.
pub fn collocation_fractions(nu: usize) -> Result<CollocationGrid> {
    if nu < 2 {
        return Err(Error::InvalidNu(nu));
    }
    let mut fractions: Vec<f64> = (0..=nu)
        .map(|j| 0.5 * (1.0 - (j as f64 * std::f64::consts::PI / nu as f64).cos()))
        .collect();
    fractions[0] = 0.0;
    fractions[nu] = 1.0;
    Ok(CollocationGrid { nu, fractions })
}

impl CollocationGrid {
    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn fraction(&self, j: usize) -> f64 {
        self.fractions[j]
    }
}

/// Collocation point x_{ij} = x_i + beta_j h_i. The j = 0 and j = nu cases
/// return the breakpoints themselves so that
/// grid_point(i, nu) == grid_point(i+1, 0) bitwise.
pub fn grid_point(p: &Partition, g: &CollocationGrid, i: usize, j: usize) -> Result<f64> {
    if i >= p.intervals() || j > g.nu() {
        return Err(Error::InvalidArgument(format!(
            "grid point index (i={i}, j={j}) out of range (N={}, nu={})",
            p.intervals(),
            g.nu()
        )));
    }
    Ok(if j == 0 {
        p.point(i)
    } else if j == g.nu() {
        p.point(i + 1)
    } else {
        p.point(i) + g.fraction(j) * p.step(i)
    })
}
