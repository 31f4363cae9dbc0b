//! JSON wire format for measures and couplings.
//!
//! ```json
//! { "space": {"dim": 1, "bounds": [[0, 1]]}, "mode": "rational",
//!   "atoms": [{"point": [0.5], "weight": "1/2"}, ...] }
//! ```
//!
//! Couplings use `"spaces"` and `"tuple"` in place of `"space"` and
//! `"point"`. Rational weights are `"p/q"` strings, float weights numbers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, WeightMode};

use super::{DiscreteCoupling, DiscreteMeasure, FactorSpace, Point};

#[derive(Serialize, Deserialize)]
pub(crate) struct SpaceWire {
    dim: usize,
    bounds: Vec<[f64; 2]>,
}

impl From<&FactorSpace> for SpaceWire {
    fn from(s: &FactorSpace) -> Self {
        SpaceWire {
            dim: s.dim(),
            bounds: s.bounds().iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }
}

impl TryFrom<SpaceWire> for FactorSpace {
    type Error = Error;
    fn try_from(w: SpaceWire) -> Result<Self> {
        if w.bounds.len() != w.dim {
            return Err(Error::Format(format!(
                "space declares dim {} but has {} bounds",
                w.dim,
                w.bounds.len()
            )));
        }
        FactorSpace::new(w.bounds.into_iter().map(|[lo, hi]| (lo, hi)).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureAtomWire {
    point: Vec<f64>,
    weight: Value,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MeasureWire {
    space: SpaceWire,
    mode: WeightMode,
    atoms: Vec<MeasureAtomWire>,
}

#[derive(Serialize, Deserialize)]
struct CouplingAtomWire {
    tuple: Vec<Vec<f64>>,
    weight: Value,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CouplingWire {
    spaces: Vec<SpaceWire>,
    mode: WeightMode,
    atoms: Vec<CouplingAtomWire>,
}

impl<W: Scalar> DiscreteMeasure<W> {
    pub(crate) fn to_wire(&self) -> MeasureWire {
        MeasureWire {
            space: self.space().into(),
            mode: W::MODE,
            atoms: self
                .atoms()
                .iter()
                .map(|(p, w)| MeasureAtomWire {
                    point: p.0.clone(),
                    weight: w.to_json(),
                })
                .collect(),
        }
    }

    pub(crate) fn from_wire(w: MeasureWire) -> Result<Self> {
        check_mode::<W>(w.mode)?;
        let space = FactorSpace::try_from(w.space)?;
        let atoms = w
            .atoms
            .into_iter()
            .map(|a| Ok((Point(a.point), W::from_json(&a.weight)?)))
            .collect::<Result<_>>()?;
        DiscreteMeasure::new(space, atoms)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_wire()).expect("measure serialises")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_wire(serde_json::from_value(v.clone())?)
    }
}

impl<W: Scalar> DiscreteCoupling<W> {
    pub(crate) fn to_wire(&self) -> CouplingWire {
        CouplingWire {
            spaces: self.spaces().iter().map(SpaceWire::from).collect(),
            mode: W::MODE,
            atoms: self
                .atoms()
                .iter()
                .map(|(t, w)| CouplingAtomWire {
                    tuple: t.iter().map(|p| p.0.clone()).collect(),
                    weight: w.to_json(),
                })
                .collect(),
        }
    }

    pub(crate) fn from_wire(w: CouplingWire) -> Result<Self> {
        check_mode::<W>(w.mode)?;
        let spaces = w
            .spaces
            .into_iter()
            .map(FactorSpace::try_from)
            .collect::<Result<Vec<_>>>()?;
        let atoms = w
            .atoms
            .into_iter()
            .map(|a| Ok((a.tuple.into_iter().map(Point).collect(), W::from_json(&a.weight)?)))
            .collect::<Result<_>>()?;
        DiscreteCoupling::new(spaces, atoms)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_wire()).expect("coupling serialises")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_wire(serde_json::from_value(v.clone())?)
    }
}

fn check_mode<W: Scalar>(mode: WeightMode) -> Result<()> {
    if mode == W::MODE {
        Ok(())
    } else {
        Err(Error::Format(format!("expected {} weights, found {mode}", W::MODE)))
    }
}

/// Reads the `"mode"` field of a measure-like JSON object.
pub fn mode_of(v: &Value) -> Result<WeightMode> {
    match v.get("mode") {
        Some(Value::String(s)) => s.parse(),
        _ => Err(Error::Format("missing \"mode\" field".into())),
    }
}

/// A coupling whose weight mode is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyCoupling {
    Rational(DiscreteCoupling<Rational>),
    Float(DiscreteCoupling<f64>),
}

impl AnyCoupling {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match mode_of(v)? {
            WeightMode::Rational => AnyCoupling::Rational(DiscreteCoupling::from_json(v)?),
            WeightMode::Float => AnyCoupling::Float(DiscreteCoupling::from_json(v)?),
        })
    }

    pub fn mode(&self) -> WeightMode {
        match self {
            AnyCoupling::Rational(_) => WeightMode::Rational,
            AnyCoupling::Float(_) => WeightMode::Float,
        }
    }

    pub fn into_rational(self) -> Result<DiscreteCoupling<Rational>> {
        match self {
            AnyCoupling::Rational(c) => Ok(c),
            AnyCoupling::Float(c) => c.map_weights(|w| Rational::from_f64(*w)),
        }
    }

    pub fn into_float(self) -> Result<DiscreteCoupling<f64>> {
        match self {
            AnyCoupling::Rational(c) => c.map_weights(|w| w.to_f64()),
            AnyCoupling::Float(c) => Ok(c),
        }
    }
}
