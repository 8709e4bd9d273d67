//! JSON forms of bodies, ellipsoids, functions and spherical measures.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bodies::Polytope;
use crate::ellipsoids::QuadraticForm;
use crate::error::{Error, Result};
use crate::isotropic::SphericalMeasure;
use crate::logconcave::{GridFn, Lattice, LogConcaveFn};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BodyJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl BodyJson {
    pub fn from_body(p: &Polytope) -> Self {
        BodyJson {
            kind: "polytope".into(),
            dimension: p.dim(),
            vertices: p.vertex_rows().into_iter().map(|r| r.into_iter().map(|v| v + 0.0).collect()).collect(),
        }
    }

    pub fn to_body(&self) -> Result<Polytope> {
        expect_type(&self.kind, "polytope")?;
        if let Some(row) = self.vertices.iter().find(|r| r.len() != self.dimension) {
            return Err(Error::InvalidInput(format!(
                "vertices: expected {} coordinates per vertex, found {}",
                self.dimension,
                row.len()
            )));
        }
        Polytope::from_rows(&self.vertices)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub matrix: Vec<Vec<f64>>,
}

impl EllipsoidJson {
    pub fn from_form(q: &QuadraticForm) -> Self {
        EllipsoidJson {
            kind: "ellipsoid".into(),
            matrix: q.rows(),
        }
    }

    pub fn to_form(&self) -> Result<QuadraticForm> {
        expect_type(&self.kind, "ellipsoid")?;
        QuadraticForm::new(matrix_from_rows(&self.matrix)?)
    }
}

/// Function schema, tagged by "family". Grid values use `null` for +∞.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FnJson {
    Gaussian {
        dimension: usize,
        scale: f64,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
    },
    QuadMinkowski {
        body: BodyJson,
        scale: f64,
    },
    Cone {
        body: BodyJson,
        offset: f64,
    },
    Indicator {
        body: BodyJson,
        offset: f64,
    },
    Grid {
        origin: Vec<f64>,
        spacing: Vec<f64>,
        shape: Vec<usize>,
        values: Vec<Option<f64>>,
    },
}

impl FnJson {
    pub fn from_fn(f: &LogConcaveFn) -> Self {
        match f {
            LogConcaveFn::Gaussian { dim, scale } => FnJson::Gaussian {
                dimension: *dim,
                scale: *scale,
            },
            LogConcaveFn::Quadratic(q) => FnJson::Quadratic { matrix: q.rows() },
            LogConcaveFn::QuadMinkowski { body, scale } => FnJson::QuadMinkowski {
                body: BodyJson::from_body(body.body()),
                scale: *scale,
            },
            LogConcaveFn::Cone { body, offset } => FnJson::Cone {
                body: BodyJson::from_body(body.body()),
                offset: *offset,
            },
            LogConcaveFn::Indicator { body, offset } => FnJson::Indicator {
                body: BodyJson::from_body(body.body()),
                offset: *offset,
            },
            LogConcaveFn::Grid(g) => {
                let lat = g.lattice();
                FnJson::Grid {
                    origin: lat.origin.clone(),
                    spacing: lat.spacing.clone(),
                    shape: lat.shape.clone(),
                    values: g.values().iter().map(|v| v.is_finite().then_some(*v)).collect(),
                }
            }
        }
    }

    pub fn to_fn(&self) -> Result<LogConcaveFn> {
        match self {
            FnJson::Gaussian { dimension, scale } => LogConcaveFn::gaussian(*dimension, *scale),
            FnJson::Quadratic { matrix } => {
                Ok(LogConcaveFn::quadratic(QuadraticForm::new(matrix_from_rows(matrix)?)?))
            }
            FnJson::QuadMinkowski { body, scale } => LogConcaveFn::quad_minkowski(body.to_body()?, *scale),
            FnJson::Cone { body, offset } => LogConcaveFn::cone(body.to_body()?, *offset),
            FnJson::Indicator { body, offset } => LogConcaveFn::indicator(body.to_body()?, *offset),
            FnJson::Grid {
                origin,
                spacing,
                shape,
                values,
            } => {
                let lat = Lattice::new(origin.clone(), spacing.clone(), shape.clone())?;
                let values = values.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
                Ok(LogConcaveFn::grid(GridFn::new(lat, values)?))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub u: Vec<f64>,
    pub w: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SphericalMeasureJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub dimension: usize,
    pub atoms: Vec<AtomJson>,
}

impl SphericalMeasureJson {
    pub fn from_measure(m: &SphericalMeasure) -> Self {
        SphericalMeasureJson {
            kind: "spherical-measure".into(),
            dimension: m.dim(),
            atoms: m
                .atoms()
                .iter()
                .zip(m.weights())
                .map(|(u, w)| AtomJson {
                    u: u.iter().copied().collect(),
                    w: *w,
                })
                .collect(),
        }
    }

    pub fn to_measure(&self) -> Result<SphericalMeasure> {
        expect_type(&self.kind, "spherical-measure")?;
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            if a.u.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: a.u.len(),
                });
            }
            atoms.push(DVector::from_row_slice(&a.u));
        }
        SphericalMeasure::new(atoms, self.atoms.iter().map(|a| a.w).collect())
    }
}

fn expect_type(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("type: expected \"{want}\", found \"{found}\"")))
    }
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix: expected a nonempty square array of rows".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn read_body(text: &str) -> Result<Polytope> {
    serde_json::from_str::<BodyJson>(text)?.to_body()
}

pub fn read_fn(text: &str) -> Result<LogConcaveFn> {
    serde_json::from_str::<FnJson>(text)?.to_fn()
}

pub fn read_measure(text: &str) -> Result<SphericalMeasure> {
    serde_json::from_str::<SphericalMeasureJson>(text)?.to_measure()
}

pub fn body_json(p: &Polytope) -> String {
    to_pretty(&BodyJson::from_body(p))
}

pub fn fn_json(f: &LogConcaveFn) -> String {
    to_pretty(&FnJson::from_fn(f))
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_round_trip() {
        let p = Polytope::regular_simplex(3).unwrap();
        let back = read_body(&body_json(&p)).unwrap();
        assert_eq!(back.vertex_rows(), p.vertex_rows());
    }

    #[test]
    fn function_round_trips() {
        let sq = Polytope::cube(2).unwrap();
        let lat = Lattice::centered(1, 1.0, 3).unwrap();
        let grid = GridFn::new(lat, vec![f64::INFINITY, 0.0, 1.0]).unwrap();
        for f in [
            LogConcaveFn::gaussian(3, 0.5).unwrap(),
            LogConcaveFn::cone(sq.clone(), 1.0).unwrap(),
            LogConcaveFn::quad_minkowski(sq.clone(), 0.5).unwrap(),
            LogConcaveFn::indicator(sq, 2.0).unwrap(),
            LogConcaveFn::grid(grid),
        ] {
            let text = fn_json(&f);
            assert_eq!(fn_json(&read_fn(&text).unwrap()), text);
        }
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(read_body("{\"type\":\"polytope\""), Err(Error::Json(_))));
        assert!(matches!(read_fn("{\"family\":\"blob\"}"), Err(Error::Json(_))));
        let flat = r#"{"type":"polytope","dimension":2,"vertices":[[0,0],[1,1],[2,2]]}"#;
        assert!(matches!(read_body(flat), Err(Error::NotFullDimensional { found: 1, .. })));
    }

    #[test]
    fn measure_round_trip() {
        let m = SphericalMeasure::cross(2);
        let text = to_pretty(&SphericalMeasureJson::from_measure(&m));
        assert_eq!(read_measure(&text).unwrap(), m);
    }
}
