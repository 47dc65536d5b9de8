//! Everything `build` can construct, in a form shared with manifests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinnet::exact::HalfInteger;
use spinnet::graph::Diagram;
use spinnet::oracle::{Orientation, ReadingSign, VertexSpec};
use spinnet::su2::{self, CorrectionFactor};

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "object", rename_all = "lowercase")]
pub enum Object {
    Symmetriser { n: usize },
    Link { j: HalfInteger },
    #[serde(rename = "3jm")]
    Vertex3 {
        spins: [HalfInteger; 3],
        #[serde(default = "default_orient")]
        orient: String,
        #[serde(default)]
        anticlockwise: bool,
    },
    #[serde(rename = "4jm")]
    Vertex4 {
        spins: [HalfInteger; 4],
        j: HalfInteger,
        #[serde(default = "default_orient4")]
        orient: String,
    },
    #[serde(rename = "6j")]
    SixJ { spins: [HalfInteger; 6] },
    Theta { spins: [HalfInteger; 3] },
    Loop { j: HalfInteger },
    Cswap,
    Crown { n: usize },
    #[serde(rename = "15j")]
    FifteenJ { spins: Vec<HalfInteger> },
}

fn default_orient() -> String {
    "ooo".into()
}

fn default_orient4() -> String {
    "iioo".into()
}

/// Open legs of an SU(2) object, in boundary order.
pub type Legs = Vec<(HalfInteger, Orientation)>;

/// Written next to a diagram file: what turns its raw value into the
/// recoupling coefficient, and how its wires group into spin legs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub correction: CorrectionFactor,
    #[serde(default)]
    pub legs: Option<Legs>,
}

impl Sidecar {
    /// `six.json` → `six.correction.json`.
    pub fn path_for(diagram: &Path) -> PathBuf {
        let stem = diagram.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        diagram.with_file_name(format!("{stem}.correction.json"))
    }
}

pub struct Built {
    pub diagram: Diagram,
    pub sidecar: Sidecar,
}

pub fn parse_spin(s: &str) -> Result<HalfInteger, Failure> {
    s.parse().map_err(|e| Failure::usage(format!("spin {s:?}: {e}")))
}

pub fn parse_orient<const N: usize>(s: &str) -> Result<[Orientation; N], Failure> {
    Orientation::parse_list(s)
        .and_then(|v| v.try_into().ok())
        .ok_or_else(|| Failure::usage(format!("orientation {s:?} needs {N} letters from i/o")))
}

fn spins<const N: usize>(args: &[String]) -> Result<[HalfInteger; N], Failure> {
    if args.len() != N {
        return Err(Failure::usage(format!("expected {N} spins, got {}", args.len())));
    }
    let v = args.iter().map(|a| parse_spin(a)).collect::<Result<Vec<_>, _>>()?;
    Ok(v.try_into().expect("length checked"))
}

fn count(args: &[String]) -> Result<usize, Failure> {
    match args {
        [a] => a.parse().map_err(|_| Failure::usage(format!("expected a wire count, got {a:?}"))),
        _ => Err(Failure::usage("expected one wire count")),
    }
}

impl Object {
    /// Object from `build` arguments.
    pub fn from_args(
        kind: &str,
        args: &[String],
        orient: Option<String>,
        anticlockwise: bool,
        j: Option<String>,
    ) -> Result<Object, Failure> {
        Ok(match kind {
            "symmetriser" => Object::Symmetriser { n: count(args)? },
            "link" => Object::Link { j: spins::<1>(args)?[0] },
            "3jm" => Object::Vertex3 {
                spins: spins(args)?,
                orient: orient.unwrap_or_else(default_orient),
                anticlockwise,
            },
            "4jm" => Object::Vertex4 {
                spins: spins(args)?,
                j: parse_spin(&j.ok_or_else(|| Failure::usage("4jm needs --j"))?)?,
                orient: orient.unwrap_or_else(default_orient4),
            },
            "6j" => Object::SixJ { spins: spins(args)? },
            "theta" => Object::Theta { spins: spins(args)? },
            "loop" => Object::Loop { j: spins::<1>(args)?[0] },
            "cswap" if args.is_empty() => Object::Cswap,
            "crown" => Object::Crown { n: count(args)? },
            "15j" => Object::FifteenJ { spins: spins::<15>(args)?.to_vec() },
            _ => return Err(Failure::usage(format!("cannot build {kind:?} from {args:?}"))),
        })
    }

    pub fn build(&self) -> Result<Built, Failure> {
        let both = |j: HalfInteger| Some(vec![(j, Orientation::Ingoing), (j, Orientation::Outgoing)]);
        let closed = Some(Vec::new());
        let (diagram, correction, legs) = match self {
            Object::Symmetriser { n } => {
                (su2::symmetriser(*n), CorrectionFactor::one(), both(HalfInteger::from_twice(*n as u32)))
            }
            Object::Link { j } => (su2::yutsis_link(*j), CorrectionFactor::one(), both(*j)),
            Object::Vertex3 { spins, orient, anticlockwise } => {
                let mut spec = VertexSpec::new(*spins, parse_orient(orient)?);
                if *anticlockwise {
                    spec.sign = ReadingSign::Anticlockwise;
                }
                let (d, c) = su2::vertex_3jm(&spec).map_err(Failure::domain)?;
                (d, c, Some(spins.iter().copied().zip(spec.orientations).collect()))
            }
            Object::Vertex4 { spins, j, orient } => {
                let os = parse_orient(orient)?;
                let (d, c) = su2::vertex_4jm(*spins, *j, os).map_err(Failure::domain)?;
                (d, c, Some(spins.iter().copied().zip(os).collect()))
            }
            Object::SixJ { spins } => {
                let (d, c) = su2::network_6j(*spins).map_err(Failure::domain)?;
                (d, c, closed)
            }
            Object::Theta { spins: [a, b, c] } => {
                let (d, k) = su2::theta_network(*a, *b, *c).map_err(Failure::domain)?;
                (d, k, closed)
            }
            Object::Loop { j } => {
                let (d, c) = su2::loop_network(*j);
                (d, c, closed)
            }
            Object::Cswap => (su2::cswap_gadget(), CorrectionFactor::one(), None),
            Object::Crown { n } => (su2::crown(*n).map_err(Failure::domain)?, CorrectionFactor::one(), None),
            Object::FifteenJ { spins } => {
                let s: [HalfInteger; 15] = spins
                    .clone()
                    .try_into()
                    .map_err(|_| Failure::usage(format!("15j needs 15 spins, got {}", spins.len())))?;
                let (d, c) = su2::network_15j(s).map_err(Failure::domain)?;
                (d, c, closed)
            }
        };
        Ok(Built { diagram, sidecar: Sidecar { correction, legs } })
    }
}
