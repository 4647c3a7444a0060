use serde::{Deserialize, Serialize};

use super::models;
use super::orbit::GroupOrbitModel;
use super::origami::{validate_origami, MarkedPolicy, Origami};
use super::SurfaceModel;
use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::matrix::GroupElement;

/// JSON description of a surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    /// Square-tiled surface; `h` and `v` are 1-based cycle lists.
    Origami {
        n: usize,
        #[serde(default)]
        h: Vec<Vec<usize>>,
        #[serde(default)]
        v: Vec<Vec<usize>>,
        #[serde(default)]
        marked_policy: MarkedPolicy,
    },
    /// The square torus with its vertex marked.
    Torus,
    /// Orbit of seed vectors under Veech group generators.
    Orbit {
        field: FieldDescriptor,
        #[serde(default)]
        generators: Vec<[[FieldElement; 2]; 2]>,
        seeds: Vec<[FieldElement; 2]>,
        volume: FieldElement,
    },
    /// A built-in model: `torus`, `l3`, `golden-l`, `theta` or `sl2z`.
    Preset { name: String },
}

impl SurfaceConfig {
    pub fn build(&self) -> Result<SurfaceModel> {
        match self {
            SurfaceConfig::Origami { n, h, v, marked_policy } => {
                if *n == 0 {
                    return Err(Error::InvalidModel("`n` must be at least 1".into()));
                }
                let o = Origami::from_cycles(*n, h, v, *marked_policy)?;
                validate_origami(&o)?;
                Ok(SurfaceModel::Origami(o))
            }
            SurfaceConfig::Torus => Ok(SurfaceModel::Origami(models::torus_origami())),
            SurfaceConfig::Orbit { field, generators, seeds, volume } => {
                if let FieldDescriptor::Quadratic { d } = field {
                    FieldDescriptor::quadratic(*d)?;
                }
                let gens = generators
                    .iter()
                    .enumerate()
                    .map(|(i, [[a, b], [c, d]])| {
                        GroupElement::new(a.clone(), b.clone(), c.clone(), d.clone()).map_err(|e| match e {
                            Error::Determinant { det, .. } => Error::Determinant { index: i, det },
                            other => other,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let seeds = seeds.iter().map(|[x, y]| (x.clone(), y.clone())).collect();
                Ok(SurfaceModel::Orbit(GroupOrbitModel::new(*field, gens, seeds, volume.clone())?))
            }
            SurfaceConfig::Preset { name } => match name.as_str() {
                "torus" => Ok(SurfaceModel::Origami(models::torus_origami())),
                "l3" => Ok(SurfaceModel::Origami(models::l3_origami())),
                "golden-l" => Ok(SurfaceModel::Orbit(models::golden_l())),
                "theta" => Ok(SurfaceModel::Orbit(models::theta_group())),
                "sl2z" => Ok(SurfaceModel::Orbit(models::sl2z_lattice())),
                other => Err(Error::InvalidModel(format!("unknown preset `{other}`"))),
            },
        }
    }
}

/// Parse and validate a JSON surface description.
pub fn parse_surface_config(text: &str) -> Result<(SurfaceConfig, SurfaceModel)> {
    let cfg: SurfaceConfig = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("surface config: {e}")))?;
    let model = cfg.build()?;
    Ok((cfg, model))
}
