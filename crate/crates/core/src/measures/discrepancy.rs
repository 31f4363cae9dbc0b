//! A bounded-Lipschitz style discrepancy between discrete measures.
//!
//! Tight convergence cannot be checked against every bounded continuous
//! function, so we take the maximum deviation over a fixed dictionary of
//! test functions. Coordinates are first rescaled to `[0, 1]` using the
//! box bounds, which keeps every dictionary entry bounded and Lipschitz.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{DiscreteCoupling, DiscreteMeasure};

/// Something that can be flattened to weighted points of `R^D`.
pub trait Flatten {
    /// Per-axis bounds of the ambient box (all factors concatenated).
    fn axis_bounds(&self) -> Vec<(f64, f64)>;
    /// Concatenated coordinates and `f64` weights.
    fn flat_atoms(&self) -> Vec<(Vec<f64>, f64)>;
}

impl<W: Scalar> Flatten for DiscreteMeasure<W> {
    fn axis_bounds(&self) -> Vec<(f64, f64)> {
        self.space().bounds().to_vec()
    }
    fn flat_atoms(&self) -> Vec<(Vec<f64>, f64)> {
        self.atoms().iter().map(|(p, w)| (p.0.clone(), w.to_f64())).collect()
    }
}

impl<W: Scalar> Flatten for DiscreteCoupling<W> {
    fn axis_bounds(&self) -> Vec<(f64, f64)> {
        self.spaces().iter().flat_map(|s| s.bounds().iter().copied()).collect()
    }
    fn flat_atoms(&self) -> Vec<(Vec<f64>, f64)> {
        self.atoms()
            .iter()
            .map(|(t, w)| (t.iter().flat_map(|p| p.0.iter().copied()).collect(), w.to_f64()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum TestFn {
    Linear(usize),
    Quadratic(usize, usize),
    /// `sin(pi * freq * t_axis)`
    Sine {
        freq: u32,
        axis: usize,
    },
}

impl TestFn {
    fn eval(&self, t: &[f64]) -> f64 {
        let v = match *self {
            TestFn::Linear(j) => t[j],
            TestFn::Quadratic(j, l) => t[j] * t[l],
            TestFn::Sine { freq, axis } => (std::f64::consts::PI * freq as f64 * t[axis]).sin(),
        };
        v.clamp(-1.0, 1.0)
    }
}

/// The deterministic dictionary used by [`bl_discrepancy`].
///
/// `size` entries for an ambient dimension `dim`: the first `size / 2` are
/// coordinate monomials (all degree-one terms, then degree-two products in
/// lexicographic order), the remaining `ceil(size / 2)` are sinusoids with
/// frequencies `1..=ceil(size / 2)` cycling through the axes.
#[derive(Clone, Debug)]
pub struct TestDictionary {
    fns: Vec<TestFn>,
}

impl TestDictionary {
    pub fn new(dim: usize, size: usize) -> Self {
        let mut monomials: Vec<TestFn> = (0..dim).map(TestFn::Linear).collect();
        for j in 0..dim {
            for l in j..dim {
                monomials.push(TestFn::Quadratic(j, l));
            }
        }
        monomials.truncate(size / 2);
        let sines = size.div_ceil(2);
        let fns = monomials
            .into_iter()
            .chain((1..=sines).map(|f| TestFn::Sine {
                freq: f as u32,
                axis: (f - 1) % dim,
            }))
            .collect();
        TestDictionary { fns }
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }
}

fn normalise(x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    x.iter().zip(bounds).map(|(v, (lo, hi))| (v - lo) / (hi - lo)).collect()
}

/// `max_phi |∫ phi da - ∫ phi db|` over a [`TestDictionary`] of `dict_size`
/// functions.
pub fn bl_discrepancy<M: Flatten>(a: &M, b: &M, dict_size: usize) -> Result<f64> {
    let bounds = a.axis_bounds();
    if bounds != b.axis_bounds() {
        return Err(Error::SpaceMismatch(
            "discrepancy between measures on different spaces".into(),
        ));
    }
    if dict_size == 0 {
        return Err(Error::InvalidArgument("dict_size must be positive".into()));
    }
    let dict = TestDictionary::new(bounds.len(), dict_size);
    let integrate = |m: &M| -> Vec<f64> {
        let mut acc = vec![0.0; dict.len()];
        for (x, w) in m.flat_atoms() {
            let t = normalise(&x, &bounds);
            for (slot, f) in acc.iter_mut().zip(&dict.fns) {
                *slot += w * f.eval(&t);
            }
        }
        acc
    };
    let ia = integrate(a);
    let ib = integrate(b);
    Ok(ia.iter().zip(&ib).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
