//! JSON and CSV file formats. Complex numbers are `[re, im]` pairs.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{preset_channel, Channel, Ensemble, Preset};
use crate::error::{QilError, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::protocols::CascadeConfig;
use crate::report::TrajectoryPoint;

type Pair = [f64; 2];

/// Channel file: either explicit Kraus operators (row-major rows of pairs)
/// or a named preset with its parameter and an optional dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Kraus {
        dim_in: usize,
        dim_out: usize,
        kraus: Vec<Vec<Vec<Pair>>>,
    },
    Preset {
        preset: Preset,
        param: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

impl ChannelSpec {
    /// `default_dim` is used for presets without an explicit `dim`.
    pub fn build(&self, default_dim: usize) -> Result<Channel> {
        match self {
            ChannelSpec::Preset { preset, param, dim } => {
                preset_channel(*preset, *param, dim.unwrap_or(default_dim))
            }
            ChannelSpec::Kraus {
                dim_in,
                dim_out,
                kraus,
            } => {
                if kraus.is_empty() {
                    return Err(QilError::KrausShape("empty Kraus list".into()));
                }
                let ops = kraus
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        if rows.len() != *dim_out || rows.iter().any(|r| r.len() != *dim_in) {
                            return Err(QilError::KrausShape(format!(
                                "operator {k} is not {dim_out}x{dim_in}"
                            )));
                        }
                        Ok(CMatrix::from_fn(*dim_out, *dim_in, |i, j| {
                            c(rows[i][j][0], rows[i][j][1])
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Channel::new(ops)
            }
        }
    }

    pub fn from_channel(ch: &Channel) -> ChannelSpec {
        let kraus = ch
            .kraus()
            .iter()
            .map(|k| {
                (0..k.nrows())
                    .map(|i| {
                        (0..k.ncols())
                            .map(|j| [k[(i, j)].re, k[(i, j)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ChannelSpec::Kraus {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleItem {
    pub prob: f64,
    pub amplitudes: Vec<Pair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub items: Vec<EnsembleItem>,
}

impl EnsembleSpec {
    pub fn build(&self) -> Result<Ensemble> {
        let items = self
            .items
            .iter()
            .map(|it| {
                (
                    it.prob,
                    CVector::from_iterator(
                        it.amplitudes.len(),
                        it.amplitudes.iter().map(|p| c(p[0], p[1])),
                    ),
                )
            })
            .collect();
        Ensemble::new(self.dim, items)
    }

    pub fn from_ensemble(ens: &Ensemble) -> EnsembleSpec {
        let items = ens
            .probs()
            .probs()
            .iter()
            .zip(ens.states())
            .map(|(&prob, v)| EnsembleItem {
                prob,
                amplitudes: v.iter().map(|z| [z.re, z.im]).collect(),
            })
            .collect();
        EnsembleSpec {
            dim: ens.dim(),
            items,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| QilError::Parse(format!("{what}: {e}")))
}

pub fn parse_channel(text: &str) -> Result<ChannelSpec> {
    parse(text, "channel")
}

pub fn parse_ensemble(text: &str) -> Result<Ensemble> {
    parse::<EnsembleSpec>(text, "ensemble")?.build()
}

pub fn parse_cascade(text: &str) -> Result<CascadeConfig> {
    let cfg: CascadeConfig = parse(text, "cascade")?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| QilError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| QilError::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Trajectory as CSV with header `step,coupling_pair,S_T_coarse`.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("step,coupling_pair,S_T_coarse\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.step, p.coupling_pair, p.s_t + 0.0));
    }
    out
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| QilError::InvalidConfig(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let io = |e: std::io::Error| QilError::InvalidConfig(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_channel_json() {
        let spec = parse_channel(r#"{"preset": "dephasing", "param": 0.5}"#).unwrap();
        let ch = spec.build(2).unwrap();
        assert_eq!(ch.dim_in(), 2);
        let spec = parse_channel(r#"{"preset": "depolarizing", "param": 0.1, "dim": 3}"#).unwrap();
        assert_eq!(spec.build(2).unwrap().dim_out(), 3);
        assert!(parse_channel(r#"{"preset": "nope", "param": 0.1}"#).is_err());
    }

    #[test]
    fn kraus_round_trip() {
        let ch = preset_channel(Preset::AmplitudeDamping, 0.3, 2).unwrap();
        let text = to_json(&ChannelSpec::from_channel(&ch)).unwrap();
        let back = parse_channel(&text).unwrap().build(2).unwrap();
        for (a, b) in ch.kraus().iter().zip(back.kraus()) {
            assert!(crate::linalg::max_abs(&(a - b)) < 1e-15);
        }
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let text = r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[0.5,0]]]]}"#;
        let err = parse_channel(text).unwrap().build(2).unwrap_err();
        assert!(matches!(err, QilError::KrausIncomplete { .. }), "{err}");
        let text = r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1,0]],[[0,0],[1,0]]]]}"#;
        assert!(matches!(
            parse_channel(text).unwrap().build(2),
            Err(QilError::KrausShape(_))
        ));
    }

    #[test]
    fn ensemble_json() {
        let h = 0.5f64.sqrt();
        let text = format!(
            r#"{{"dim": 2, "items": [{{"prob": 0.5, "amplitudes": [[1,0],[0,0]]}}, {{"prob": 0.5, "amplitudes": [[{h},0],[{h},0]]}}]}}"#
        );
        let ens = parse_ensemble(&text).unwrap();
        assert_eq!(ens.len(), 2);
        let again = parse_ensemble(&to_json(&EnsembleSpec::from_ensemble(&ens)).unwrap()).unwrap();
        assert_eq!(again.states(), ens.states());
        assert!(parse_ensemble(r#"{"dim": 2, "items": []}"#).is_err());
        assert!(parse_ensemble("{").is_err());
    }

    #[test]
    fn cascade_json() {
        let cfg = parse_cascade(r#"{"dims": [2, 4, 8], "sweeps": 3, "seed": 5}"#).unwrap();
        assert_eq!(cfg.dims, vec![2, 4, 8]);
        assert!(parse_cascade(r#"{"dims": [2], "sweeps": 1, "seed": 5}"#).is_err());
    }

    #[test]
    fn csv_and_atomic_write() {
        let pts = vec![
            TrajectoryPoint {
                step: 0,
                coupling_pair: "initial".into(),
                s_t: 0.0,
            },
            TrajectoryPoint {
                step: 1,
                coupling_pair: "Q>-Q0".into(),
                s_t: 0.25,
            },
        ];
        let csv = trajectory_csv(&pts);
        assert_eq!(
            csv,
            "step,coupling_pair,S_T_coarse\n0,initial,0\n1,Q>-Q0,0.25\n"
        );
        let dir = std::env::temp_dir().join(format!("qil-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        write_atomic(&path, &csv).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), csv);
        fs::remove_dir_all(&dir).unwrap();
    }
}
