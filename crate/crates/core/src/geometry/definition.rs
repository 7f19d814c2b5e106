use crate::error::{Error, Result};
use crate::exprlang::{eval, parse, Expression};
use crate::tolerances::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Axis-aligned coordinate box.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Definition("domain bounds differ in length".into()));
        }
        for (a, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Definition(format!(
                    "domain axis {a} needs finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Domain { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .enumerate()
                .all(|(a, v)| *v >= self.lower[a] && *v <= self.upper[a])
    }

    /// Distance margin check: every coordinate at least `margin[a]` away
    /// from both faces.
    pub fn contains_with_margin(&self, x: &[f64], margin: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(a, v)| {
                *v - margin[a] >= self.lower[a] && *v + margin[a] <= self.upper[a]
            })
    }
}

/// A chart with a metric, a candidate unit Killing field and optionally an
/// analytic adapted frame.
#[derive(Debug, Clone)]
pub struct ManifoldDefinition {
    pub name: String,
    pub coords: Vec<String>,
    /// Packed upper triangle, row-major.
    metric: Vec<Expression>,
    pub field: Vec<Expression>,
    /// Frame columns `E_1, E_1*, ..., E_m, E_m*, kernel..., V`; each column
    /// holds the coordinate components.
    pub frame: Option<Vec<Vec<Expression>>>,
    pub domain: Domain,
    pub grid: Vec<usize>,
    pub tolerances: Tolerances,
}

fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl ManifoldDefinition {
    /// Assembles a definition from parsed parts. `metric` is indexed
    /// `[i][j]` and only the upper triangle (`i <= j`) is read.
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        metric: Vec<Vec<Expression>>,
        field: Vec<Expression>,
        frame: Option<Vec<Vec<Expression>>>,
        domain: Domain,
        grid: Vec<usize>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Definition("dimension must be positive".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::Definition(format!("duplicate coordinate \"{c}\"")));
            }
        }
        if metric.len() != n || metric.iter().any(|row| row.len() != n) {
            return Err(Error::Definition(format!("metric must be {n}x{n}")));
        }
        if field.len() != n {
            return Err(Error::Definition(format!(
                "field has {} components, expected {n}",
                field.len()
            )));
        }
        if let Some(fr) = &frame {
            if fr.len() != n || fr.iter().any(|c| c.len() != n) {
                return Err(Error::Definition(format!(
                    "frame must have {n} columns of {n} components"
                )));
            }
        }
        if domain.dim() != n {
            return Err(Error::Definition(format!("domain must have {n} axes")));
        }
        if grid.len() != n || grid.iter().any(|c| *c == 0) {
            return Err(Error::Definition(format!(
                "grid needs {n} positive counts"
            )));
        }
        let mut packed_metric = Vec::with_capacity(n * (n + 1) / 2);
        for (i, row) in metric.into_iter().enumerate() {
            packed_metric.extend(row.into_iter().skip(i));
        }
        Ok(ManifoldDefinition {
            name: name.into(),
            coords,
            metric: packed_metric,
            field,
            frame,
            domain,
            grid,
            tolerances: Tolerances::default(),
        })
    }

    /// Parses every component from text. Entries of `metric` below the
    /// diagonal are ignored.
    pub fn from_sources(
        name: impl Into<String>,
        coords: &[&str],
        metric: &[Vec<String>],
        field: &[String],
        frame: Option<&[Vec<String>]>,
        domain: Domain,
        grid: Vec<usize>,
    ) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let p = |what: String, src: &str| {
            parse(src, &coords).map_err(|source| Error::Parse {
                context: what,
                source,
            })
        };
        let n = coords.len();
        if metric.len() != n || metric.iter().any(|r| r.len() != n) {
            return Err(Error::Definition(format!("metric must be {n}x{n}")));
        }
        let mut m = Vec::with_capacity(n);
        for (i, row) in metric.iter().enumerate() {
            let mut r = Vec::with_capacity(n);
            for (j, src) in row.iter().enumerate() {
                if j < i {
                    r.push(Expression::num(0.0));
                } else {
                    r.push(p(format!("metric[{i},{j}]"), src)?);
                }
            }
            m.push(r);
        }
        let f = field
            .iter()
            .enumerate()
            .map(|(k, s)| p(format!("V[{k}]"), s))
            .collect::<Result<Vec<_>>>()?;
        let fr = match frame {
            Some(cols) => Some(
                cols.iter()
                    .enumerate()
                    .map(|(a, col)| {
                        col.iter()
                            .enumerate()
                            .map(|(k, s)| p(format!("frame[{a}][{k}]"), s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Self::new(name, coords, m, f, fr, domain, grid)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expression {
        &self.metric[packed(self.dim(), i, j)]
    }

    /// Packed upper triangle in row-major order with its `(i, j)` labels.
    pub fn metric_entries(&self) -> impl Iterator<Item = ((usize, usize), &Expression)> {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (i..n).map(move |j| (i, j)))
            .map(move |(i, j)| ((i, j), self.metric_expr(i, j)))
    }

    pub fn without_frame(&self) -> Self {
        let mut d = self.clone();
        d.frame = None;
        d
    }

    /// Per-axis difference step `h_T`.
    pub fn fd_steps(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|a| self.tolerances.fd_step * self.domain.width(a))
            .collect()
    }

    /// True when a central stencil of width `2 h_T` fits around `x`.
    pub fn is_interior(&self, x: &[f64]) -> bool {
        let margin: Vec<f64> = self.fd_steps().iter().map(|h| 2.0 * h).collect();
        self.domain.contains_with_margin(x, &margin)
    }

    /// Cell-centred grid: `count` points per axis, none on the boundary.
    pub fn grid_points(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let total: usize = self.grid.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            out.push(
                (0..n)
                    .map(|a| {
                        let w = self.domain.width(a) / self.grid[a] as f64;
                        self.domain.lower[a] + (idx[a] as f64 + 0.5) * w
                    })
                    .collect(),
            );
            for a in (0..n).rev() {
                idx[a] += 1;
                if idx[a] < self.grid[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        out
    }

    /// Uniform random points in the box shrunk by 5% of the width on every
    /// side, from a seeded generator.
    pub fn random_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                (0..self.dim())
                    .map(|a| {
                        let w = self.domain.width(a);
                        let lo = self.domain.lower[a] + 0.05 * w;
                        rng.gen_range(lo..lo + 0.9 * w)
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks that the stored metric is usable: every off-diagonal pair that
    /// was supplied twice must agree numerically at the grid points.
    pub fn check_metric_pair(
        &self,
        i: usize,
        j: usize,
        lower_entry: &Expression,
    ) -> Result<()> {
        let upper = self.metric_expr(i.min(j), i.max(j));
        for x in self.grid_points() {
            let a = eval(upper, &x).map_err(|source| Error::Eval {
                context: format!("metric[{},{}]", i.min(j), i.max(j)),
                source,
            })?;
            let b = eval(lower_entry, &x).map_err(|source| Error::Eval {
                context: format!("metric[{},{}]", i.max(j), i.min(j)),
                source,
            })?;
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return Err(Error::Definition(format!(
                    "metric is not symmetric: entry ({},{}) differs from ({},{}) at {:?}",
                    i.max(j),
                    i.min(j),
                    i.min(j),
                    i.max(j),
                    x
                )));
            }
        }
        Ok(())
    }
}
