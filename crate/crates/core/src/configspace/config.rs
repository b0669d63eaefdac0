use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered p-tuple of points of ℝⁿ. Indices into the tuple are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    points: Vec<Vec<f64>>,
    cluster_tol: f64,
}

impl Configuration {
    /// Uses the default tolerance 1e−9·(diameter + 1).
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let mut c = Self::with_tol(points, 0.0)?;
        c.cluster_tol = 1e-9 * (c.diameter() + 1.0);
        Ok(c)
    }

    pub fn with_tol(points: Vec<Vec<f64>>, cluster_tol: f64) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPoints)?;
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidInput("points must have at least one coordinate".into()));
        }
        if let Some(bad) = points.iter().find(|x| x.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        if !(cluster_tol >= 0.0) {
            return Err(Error::InvalidInput(format!("cluster_tol must be ≥ 0, got {cluster_tol}")));
        }
        Ok(Configuration { points, cluster_tol })
    }

    pub fn n(&self) -> usize {
        self.points[0].len()
    }

    pub fn p(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max(distance(a, b));
            }
        }
        d
    }

    /// Transitive closure of ‖xᵢ − xⱼ‖ ≤ cluster_tol.
    pub fn clustering_partition(&self) -> Partition {
        let p = self.p();
        let mut parent: Vec<usize> = (0..p).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..p {
            for j in i + 1..p {
                if distance(&self.points[i], &self.points[j]) <= self.cluster_tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; p];
        for i in 0..p {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = cells.len();
                cells.push(Vec::new());
            }
            cells[slot[root]].push(i);
        }
        Partition { p, cells }
    }

    /// True when no two points cluster, i.e. the tuple lies off the large diagonal.
    pub fn is_off_diagonal(&self) -> bool {
        self.clustering_partition().is_discrete()
    }

    /// The sub-tuple x̄_I, keeping the order of `indices` and this tolerance.
    pub fn restrict(&self, indices: &[usize]) -> Result<Configuration> {
        if indices.is_empty() {
            return Err(Error::EmptyPoints);
        }
        let mut points = Vec::with_capacity(indices.len());
        for &i in indices {
            let x = self
                .points
                .get(i)
                .ok_or_else(|| Error::InvalidInput(format!("index {i} out of range for {} points", self.p())))?;
            points.push(x.clone());
        }
        Ok(Configuration { points, cluster_tol: self.cluster_tol })
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Partition of {0, …, p−1} into non-empty cells, stored canonically: each
/// cell sorted, cells ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    p: usize,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(p: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; p];
        let mut cells: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        for c in &cells {
            if c.is_empty() {
                return Err(Error::InvalidInput("empty partition cell".into()));
            }
            for &i in c {
                if i >= p || seen[i] {
                    return Err(Error::InvalidInput(format!("index {i} repeated or out of range")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput(format!("cells do not cover 0..{p}")));
        }
        cells.sort_by_key(|c| c[0]);
        Ok(Partition { p, cells })
    }

    /// {{0}, …, {p−1}}.
    pub fn discrete(p: usize) -> Self {
        Partition { p, cells: (0..p).map(|i| vec![i]).collect() }
    }

    /// {{0, …, p−1}}.
    pub fn coarsest(p: usize) -> Self {
        Partition { p, cells: vec![(0..p).collect()] }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.p
    }

    /// Block sizes, largest first.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.cells.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// All set partitions of {0, …, p−1} (Bell(p) of them), via restricted
    /// growth strings.
    pub fn all(p: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if p == 0 {
            return out;
        }
        let mut rgs = vec![0usize; p];
        loop {
            let blocks = rgs.iter().max().unwrap() + 1;
            let mut cells = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                cells[b].push(i);
            }
            out.push(Partition { p, cells });
            // next restricted growth string
            let mut i = p - 1;
            loop {
                if i == 0 {
                    return out;
                }
                let max_prefix = rgs[..i].iter().max().copied().unwrap_or(0);
                if rgs[i] <= max_prefix {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|r| *r = 0);
                    break;
                }
                i -= 1;
            }
        }
    }
}

impl std::fmt::Display for Partition {
    /// 1-based, e.g. `{1,2}{3}`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.cells {
            let items: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}
