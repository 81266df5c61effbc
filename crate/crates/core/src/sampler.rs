//! Exact sampling by stopping the infinite maximum early.
//!
//! Points arrive in decreasing order and every component of `R_{n+1} Q^(n+1)`
//! is at most `R_{n+1}`. Once a point no longer exceeds the smallest
//! component of the running maximum `Y`, no later point can change `Y`,
//! so the loop stops there and the result is an exact draw.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::points::PointStream;
use crate::radial::SharedMeasure;
use crate::rng::substream;
use crate::simplex::{SimplexLaw, SimplexSampler};

pub const DEFAULT_LOOP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Uniform simplex law and non-finite measure; `u` is a copula draw.
    Copula,
    /// Any simplex law and any measure; `y` follows the max-id law.
    MaxId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    /// `F(y_i)` componentwise.
    pub u: Vec<f64>,
    pub y: Vec<f64>,
    /// Points that entered the loop body.
    pub loops: usize,
    /// The first point that failed the loop condition; `None` if a finite
    /// measure ran out of points first.
    pub stop_point: Option<f64>,
}

/// Execution record of one draw, for auditing the stopping rule.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    /// Accepted points in order.
    pub points: Vec<f64>,
    /// Simplex vector drawn with each accepted point.
    pub directions: Vec<Vec<f64>>,
    /// `min_i Y_i` just before each accepted point was applied.
    pub minima: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub n: usize,
    pub mean_loops: f64,
    pub loop_histogram: BTreeMap<usize, usize>,
    pub wall_time_per_sample: Duration,
}

impl BatchSummary {
    fn from_rows(rows: &[SampleResult], elapsed: Duration) -> Self {
        let mut loop_histogram = BTreeMap::new();
        let mut total = 0usize;
        for r in rows {
            *loop_histogram.entry(r.loops).or_insert(0) += 1;
            total += r.loops;
        }
        let n = rows.len();
        Self {
            n,
            mean_loops: total as f64 / n as f64,
            loop_histogram,
            wall_time_per_sample: elapsed / n.max(1) as u32,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sampler {
    generator: Generator,
    law: SimplexLaw,
    simplex: SimplexSampler,
    mode: Mode,
    loop_cap: usize,
}

impl Sampler {
    /// Sampler for the reciprocal Archimedean copula of `measure` in `dim` dimensions.
    pub fn copula(measure: SharedMeasure, dim: usize) -> Result<Self> {
        if measure.total_mass().is_finite() {
            return Err(Error::Unsupported(
                "copula sampling needs a radial measure with infinite total mass".into(),
            ));
        }
        Self::build(measure, dim, SimplexLaw::Uniform, Mode::Copula)
    }

    /// Sampler for the max-id vector `Y` with a general simplex law.
    pub fn max_id(measure: SharedMeasure, dim: usize, law: SimplexLaw) -> Result<Self> {
        Self::build(measure, dim, law, Mode::MaxId)
    }

    fn build(measure: SharedMeasure, dim: usize, law: SimplexLaw, mode: Mode) -> Result<Self> {
        let generator = Generator::new(measure, dim)?;
        let simplex = law.sampler(dim)?;
        Ok(Self {
            generator,
            law,
            simplex,
            mode,
            loop_cap: DEFAULT_LOOP_CAP,
        })
    }

    pub fn with_loop_cap(mut self, cap: usize) -> Self {
        self.loop_cap = cap;
        self
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn law(&self) -> &SimplexLaw {
        &self.law
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SampleResult> {
        self.run(rng, None)
    }

    pub fn sample_traced<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SampleResult, Trace)> {
        let mut trace = Trace::default();
        let result = self.run(rng, Some(&mut trace))?;
        Ok((result, trace))
    }

    fn run<R: Rng + ?Sized>(&self, rng: &mut R, mut trace: Option<&mut Trace>) -> Result<SampleResult> {
        let dim = self.dim();
        let measure = self.generator.measure().as_ref();
        let mut y = vec![0.0f64; dim];
        let mut q = vec![0.0; dim];
        let mut stream = PointStream::new(measure, rng);
        let mut next = stream.next_point()?;
        let mut loops = 0usize;
        let mut minimum = 0.0;
        while let Some(r) = next {
            if r <= minimum {
                break;
            }
            loops += 1;
            if loops > self.loop_cap {
                return Err(Error::LoopCap { cap: self.loop_cap });
            }
            self.simplex.sample_into(stream.rng(), &mut q);
            if let Some(t) = trace.as_deref_mut() {
                t.points.push(r);
                t.directions.push(q.clone());
                t.minima.push(minimum);
            }
            for (yi, qi) in y.iter_mut().zip(&q) {
                *yi = yi.max(r * qi);
            }
            minimum = y.iter().copied().fold(f64::INFINITY, f64::min);
            next = stream.next_point()?;
        }
        let u = y
            .iter()
            .map(|&yi| self.generator.generator_f(yi))
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleResult {
            u,
            y,
            loops,
            stop_point: next,
        })
    }

    /// `n` draws, row `i` from substream `i` of `seed`. Output does not depend
    /// on `threads`.
    pub fn sample_batch(
        &self,
        n: usize,
        seed: u64,
        threads: usize,
    ) -> Result<(Vec<SampleResult>, BatchSummary)> {
        if n == 0 {
            return Err(Error::Argument("batch size must be at least 1".into()));
        }
        let start = Instant::now();
        let draw = |i: usize| self.sample_one(&mut substream(seed, i as u64));
        let results: Vec<Result<SampleResult>> = if threads <= 1 {
            (0..n).map(draw).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Argument(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(draw).collect())
        };
        let mut rows = Vec::with_capacity(n);
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(row) => rows.push(row),
                Err(e) => {
                    return Err(Error::Partial {
                        completed: i,
                        source: Box::new(e),
                    })
                }
            }
        }
        let summary = BatchSummary::from_rows(&rows, start.elapsed());
        Ok((rows, summary))
    }
}

/// `E[M] = d Σ_{i=1}^d C(d,i) (-1)^{i+1} / H_i` for `ν(dx) = d x^{-2} dx`.
pub fn expected_loops_galambos_theta1(dim: usize) -> f64 {
    let d = dim as f64;
    let mut harmonic = 0.0;
    let mut binom = 1.0;
    let mut sum = 0.0;
    for i in 1..=dim {
        harmonic += 1.0 / i as f64;
        binom *= (dim + 1 - i) as f64 / i as f64;
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * binom / harmonic;
    }
    d * sum
}
