//! Uniform 2D phase-space grids, sampled Wigner fields, and deterministic
//! field reductions.
//!
//! Reductions (integral, negative volume, minimum) run as sequential
//! row-major folds with compensated accumulation, so their results do not
//! depend on how the field itself was filled. Field generation is pure per
//! grid point and is parallelized over rows.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Magnitude bound 2/pi obeyed by every Wigner function.
pub const WIGNER_BOUND: f64 = 2.0 / std::f64::consts::PI;

/// Slack added to [`WIGNER_BOUND`] when validating quadrature-generated fields.
pub const WIGNER_BOUND_SLACK: f64 = 1e-9;

/// Floor below which a field value counts as genuinely negative (guards
/// against quadrature noise masquerading as negativity).
pub const NEGATIVITY_FLOOR: f64 = 1e-10;

/// Uniform rectangular lattice in the (q, p) quadrature plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
        nq: usize,
        np: usize,
    ) -> Result<Self> {
        let spec = GridSpec {
            q_min,
            q_max,
            p_min,
            p_max,
            nq,
            np,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default window [-6, 6]^2 at 481x481 points (step 0.025). Covers
    /// |alpha| <= 1.5 states plus five standard deviations of Gaussian tail,
    /// which keeps normalization error below 1e-8 for every state used here.
    pub fn default_window() -> Self {
        GridSpec {
            q_min: -6.0,
            q_max: 6.0,
            p_min: -6.0,
            p_max: 6.0,
            nq: 481,
            np: 481,
        }
    }

    /// Square window centered at (qc, pc) with the given half-width and an
    /// odd point count per axis, so the center is itself a grid point.
    pub fn centered(qc: f64, pc: f64, half_width: f64, points: usize) -> Result<Self> {
        GridSpec::new(
            qc - half_width,
            qc + half_width,
            pc - half_width,
            pc + half_width,
            points,
            points,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.q_max > self.q_min
            && self.p_max > self.p_min
            && self.nq >= 2
            && self.np >= 2
            && [self.q_min, self.q_max, self.p_min, self.p_max]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "q in [{}, {}], p in [{}, {}], nq = {}, np = {}",
                self.q_min, self.q_max, self.p_min, self.p_max, self.nq, self.np
            )))
        }
    }

    #[inline]
    pub fn hq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    #[inline]
    pub fn hp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    #[inline]
    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.hq()
    }

    #[inline]
    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.hp()
    }

    pub fn len(&self) -> usize {
        self.nq * self.np
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Negative-part volume of a sampled field, with resolution metadata.
#[derive(Clone, Debug)]
pub struct NegativityResult {
    /// |integral of min(W, 0)| over the window.
    pub p_nw: f64,
    /// Number of grid points with W < 0.
    pub negative_cells: usize,
    pub grid: GridSpec,
    /// |p_nw at step 2h (bilinear subsample) - p_nw at step h|.
    pub refinement_estimate: f64,
}

/// Real-valued field sampled on a [`GridSpec`], row-major with q as the
/// slow (row) index.
#[derive(Clone, Debug)]
pub struct WignerField {
    spec: GridSpec,
    values: Vec<f64>,
}

/// Neumaier-compensated accumulator; fixed-order folds with this are
/// reproducible to the last bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[inline]
fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

impl WignerField {
    /// Wrap precomputed values. Only the shape is checked; callers sampling
    /// physical states should use [`WignerField::sample`], which also
    /// enforces the Wigner magnitude bound.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match {}x{} grid",
                values.len(),
                spec.nq,
                spec.np
            )));
        }
        Ok(WignerField { spec, values })
    }

    /// Sample a continuous evaluator on the grid (parallel over rows) and
    /// validate finiteness and the 2/pi magnitude bound.
    pub fn sample<F>(spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        spec.validate()?;
        let np = spec.np;
        let mut values = vec![0.0; spec.len()];
        values.par_chunks_mut(np).enumerate().for_each(|(i, row)| {
            let q = spec.q(i);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = f(q, spec.p(j));
            }
        });
        let field = WignerField { spec, values };
        field.validate_physical()?;
        Ok(field)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFiniteField)
        }
    }

    /// Finiteness plus the pointwise |W| <= 2/pi + slack bound.
    pub fn validate_physical(&self) -> Result<()> {
        self.ensure_finite()?;
        let bound = WIGNER_BOUND + WIGNER_BOUND_SLACK;
        for (idx, &v) in self.values.iter().enumerate() {
            if v.abs() > bound {
                let i = idx / self.spec.np;
                let j = idx % self.spec.np;
                return Err(Error::WignerBound {
                    value: v,
                    q: self.spec.q(i),
                    p: self.spec.p(j),
                });
            }
        }
        Ok(())
    }

    /// 2D trapezoid integral, accumulated row-major with compensation.
    pub fn integrate(&self) -> Result<f64> {
        self.ensure_finite()?;
        let (nq, np) = (self.spec.nq, self.spec.np);
        let mut acc = KahanSum::new();
        for i in 0..nq {
            let wq = trapezoid_weight(i, nq);
            let row = &self.values[i * np..(i + 1) * np];
            for (j, &v) in row.iter().enumerate() {
                acc.add(wq * trapezoid_weight(j, np) * v);
            }
        }
        Ok(acc.value() * self.spec.hq() * self.spec.hp())
    }

    fn negative_part_volume(&self) -> f64 {
        let (nq, np) = (self.spec.nq, self.spec.np);
        let mut acc = KahanSum::new();
        for i in 0..nq {
            let wq = trapezoid_weight(i, nq);
            let row = &self.values[i * np..(i + 1) * np];
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    acc.add(wq * trapezoid_weight(j, np) * v);
                }
            }
        }
        (acc.value() * self.spec.hq() * self.spec.hp()).abs()
    }

    /// Volume of the negative part: |integral of min(W, 0)|, with a coarse
    /// (step 2h) re-evaluation filling `refinement_estimate`.
    pub fn negative_volume(&self) -> Result<NegativityResult> {
        self.ensure_finite()?;
        let p_nw = self.negative_part_volume();
        let negative_cells = self.values.iter().filter(|&&v| v < 0.0).count();
        let coarse = self.subsample_half();
        let refinement_estimate = (p_nw - coarse.negative_part_volume()).abs();
        Ok(NegativityResult {
            p_nw,
            negative_cells,
            grid: self.spec,
            refinement_estimate,
        })
    }

    /// Grid point with the minimum value; ties broken by the smallest
    /// row-major index.
    pub fn min_location(&self) -> Result<(f64, f64, f64)> {
        self.ensure_finite()?;
        let mut best_idx = 0usize;
        let mut best = self.values[0];
        for (idx, &v) in self.values.iter().enumerate() {
            if v < best {
                best = v;
                best_idx = idx;
            }
        }
        let i = best_idx / self.spec.np;
        let j = best_idx % self.spec.np;
        Ok((self.spec.q(i), self.spec.p(j), best))
    }

    pub fn min_value(&self) -> Result<f64> {
        self.min_location().map(|(_, _, v)| v)
    }

    /// Bilinear value at (q, p); zero outside the window.
    pub fn sample_bilinear(&self, q: f64, p: f64) -> f64 {
        let spec = &self.spec;
        if q < spec.q_min || q > spec.q_max || p < spec.p_min || p > spec.p_max {
            return 0.0;
        }
        let fq = ((q - spec.q_min) / spec.hq()).clamp(0.0, (spec.nq - 1) as f64);
        let fp = ((p - spec.p_min) / spec.hp()).clamp(0.0, (spec.np - 1) as f64);
        let i0 = (fq.floor() as usize).min(spec.nq - 2);
        let j0 = (fp.floor() as usize).min(spec.np - 2);
        let tq = fq - i0 as f64;
        let tp = fp - j0 as f64;
        let v00 = self.at(i0, j0);
        let v01 = self.at(i0, j0 + 1);
        let v10 = self.at(i0 + 1, j0);
        let v11 = self.at(i0 + 1, j0 + 1);
        (1.0 - tq) * ((1.0 - tp) * v00 + tp * v01) + tq * ((1.0 - tp) * v10 + tp * v11)
    }

    /// Bicubic value at (q, p): the 4x4-point tensor Lagrange cubic, which
    /// reproduces cubics exactly and is therefore O(h^4) accurate on smooth
    /// fields. Zero outside the window, edge rows replicated for the
    /// outermost stencils.
    pub fn sample_bicubic(&self, q: f64, p: f64) -> f64 {
        let spec = &self.spec;
        if q < spec.q_min || q > spec.q_max || p < spec.p_min || p > spec.p_max {
            return 0.0;
        }
        let fq = ((q - spec.q_min) / spec.hq()).clamp(0.0, (spec.nq - 1) as f64);
        let fp = ((p - spec.p_min) / spec.hp()).clamp(0.0, (spec.np - 1) as f64);
        let i0 = (fq.floor() as usize).min(spec.nq - 2);
        let j0 = (fp.floor() as usize).min(spec.np - 2);
        let tq = fq - i0 as f64;
        let tp = fp - j0 as f64;
        let idx = |k: isize, n: usize| -> usize { k.clamp(0, n as isize - 1) as usize };
        let mut rows = [0.0; 4];
        for (r, row_val) in rows.iter_mut().enumerate() {
            let i = idx(i0 as isize + r as isize - 1, spec.nq);
            let f = |dj: isize| self.at(i, idx(j0 as isize + dj, spec.np));
            *row_val = cubic_lagrange(f(-1), f(0), f(1), f(2), tp);
        }
        cubic_lagrange(rows[0], rows[1], rows[2], rows[3], tq)
    }

    /// Coarse copy at roughly twice the step, sampled bilinearly (exact node
    /// values when the point counts are odd, which the defaults are).
    pub fn subsample_half(&self) -> WignerField {
        let spec = &self.spec;
        let nc_q = (spec.nq / 2 + 1).max(2);
        let nc_p = (spec.np / 2 + 1).max(2);
        let coarse = GridSpec {
            q_min: spec.q_min,
            q_max: spec.q_max,
            p_min: spec.p_min,
            p_max: spec.p_max,
            nq: nc_q,
            np: nc_p,
        };
        let mut values = Vec::with_capacity(coarse.len());
        for i in 0..nc_q {
            let q = coarse.q(i);
            for j in 0..nc_p {
                values.push(self.sample_bilinear(q, coarse.p(j)));
            }
        }
        WignerField {
            spec: coarse,
            values,
        }
    }

    /// CSV serialization: header `q,p,w`, row-major, 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "q,p,w")?;
        for i in 0..self.spec.nq {
            let q = self.spec.q(i);
            for j in 0..self.spec.np {
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_g17(q),
                    fmt_g17(self.spec.p(j)),
                    fmt_g17(self.at(i, j))
                )?;
            }
        }
        Ok(())
    }
}

/// Cubic through the four nodes -1, 0, 1, 2, evaluated at t in [0, 1].
fn cubic_lagrange(fm1: f64, f0: f64, f1: f64, f2: f64, t: f64) -> f64 {
    let a = t + 1.0;
    let b = t - 1.0;
    let c = t - 2.0;
    (-fm1 * t * b * c + 3.0 * f0 * a * b * c - 3.0 * f1 * a * t * c + f2 * a * t * b) / 6.0
}

/// Decimal rendering with 17 significant digits; round-trips any f64 and is
/// byte-stable across runs.
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}
