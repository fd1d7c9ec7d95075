use serde::{Deserialize, Serialize};

use super::{GcodeError, Result};
use crate::planner::{Segment, SegmentKind, Toolpath};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalState {
    pub absolute_xyz: bool,
    pub absolute_e: bool,
    /// mm per programmed unit (1 for G21, 25.4 for G20).
    pub unit: f64,
    pub feed: Option<f64>,
    pub temperature: Option<f64>,
}

impl Default for ModalState {
    fn default() -> Self {
        Self {
            absolute_xyz: true,
            absolute_e: true,
            unit: 1.0,
            feed: None,
            temperature: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalChange {
    pub line: usize,
    pub state: ModalState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub line: usize,
    pub rapid: bool,
    pub from: [f64; 3],
    pub to: [f64; 3],
    /// E increment.
    pub e: f64,
    /// Whether the line carried an E word.
    pub extrudes: bool,
    /// mm/min
    pub feed: f64,
    pub layer: Option<usize>,
    pub tag: Option<SegmentKind>,
}

impl Move {
    pub fn xy_length(&self) -> f64 {
        (self.to[0] - self.from[0]).hypot(self.to[1] - self.from[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

/// Moves grouped by the z at which they end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZBand {
    pub z: f64,
    pub moves: usize,
    pub travel_length: f64,
    pub extrude_length: f64,
    pub e_total: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParsedProgram {
    pub moves: Vec<Move>,
    pub modal: Vec<ModalChange>,
    pub warnings: Vec<Warning>,
}

/// z values closer than this share a band.
pub const Z_BAND_TOL: f64 = 1e-3;

impl ParsedProgram {
    pub fn total_e(&self) -> f64 {
        self.moves.iter().map(|m| m.e).sum()
    }

    pub fn extrusion_moves(&self) -> impl Iterator<Item = &Move> {
        self.moves.iter().filter(|m| m.extrudes)
    }

    pub fn z_bands(&self) -> Vec<ZBand> {
        let mut bands: Vec<ZBand> = Vec::new();
        for m in &self.moves {
            let z = m.to[2];
            let i = match bands.iter().position(|b| (b.z - z).abs() <= Z_BAND_TOL) {
                Some(i) => i,
                None => {
                    bands.push(ZBand {
                        z,
                        moves: 0,
                        travel_length: 0.0,
                        extrude_length: 0.0,
                        e_total: 0.0,
                    });
                    bands.len() - 1
                }
            };
            let b = &mut bands[i];
            b.moves += 1;
            if m.extrudes {
                b.extrude_length += m.xy_length();
                b.e_total += m.e;
            } else {
                b.travel_length += m.xy_length();
            }
        }
        bands.sort_by(|a, b| a.z.total_cmp(&b.z));
        bands
    }

    /// Rebuilds a toolpath from the moves, reading segment kinds and layer
    /// indices from the emitter's comments. Each layer's base is taken as
    /// its lowest extrusion z.
    pub fn to_toolpath(&self, scale: f64) -> Toolpath {
        let mut layer_z_base: Vec<f64> = Vec::new();
        let mut segments = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            let layer = m.layer.unwrap_or(0);
            let kind = if m.extrudes {
                m.tag.unwrap_or(SegmentKind::CoilExtrude)
            } else {
                SegmentKind::Travel
            };
            if kind.extrudes() {
                if layer_z_base.len() <= layer {
                    layer_z_base.resize(layer + 1, f64::INFINITY);
                }
                let z = m.to[2];
                layer_z_base[layer] = layer_z_base[layer].min(z);
            }
            segments.push(Segment {
                kind,
                start: m.from,
                end: m.to,
                feed: m.feed,
                screw: m.e / scale,
                layer,
            });
        }
        for z in layer_z_base.iter_mut() {
            if !z.is_finite() {
                *z = 0.0;
            }
        }
        Toolpath {
            segments,
            layer_z_base,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> GcodeError {
    GcodeError::Syntax {
        line,
        message: message.into(),
    }
}

struct Words {
    code: (char, u32),
    params: Vec<(char, f64)>,
}

impl Words {
    fn get(&self, c: char) -> Option<f64> {
        self.params.iter().find(|(k, _)| *k == c).map(|(_, v)| *v)
    }
}

fn words(line: usize, text: &str) -> Result<Option<Words>> {
    let mut tokens = text.split_whitespace();
    let Some(head) = tokens.next() else {
        return Ok(None);
    };
    let mut chars = head.chars();
    let letter = chars.next().unwrap().to_ascii_uppercase();
    let number = chars.as_str();
    if !letter.is_ascii_alphabetic() {
        return Err(syntax(
            line,
            format!("expected a command word, found {head:?}"),
        ));
    }
    let code: u32 = number
        .parse()
        .map_err(|_| syntax(line, format!("malformed command {head:?}")))?;
    let mut params = Vec::new();
    for t in tokens {
        let mut chars = t.chars();
        let c = chars.next().unwrap().to_ascii_uppercase();
        if !c.is_ascii_alphabetic() {
            return Err(syntax(line, format!("malformed token {t:?}")));
        }
        let v: f64 = chars
            .as_str()
            .parse()
            .map_err(|_| syntax(line, format!("malformed value in {t:?}")))?;
        if !v.is_finite() {
            return Err(syntax(line, format!("non-finite value in {t:?}")));
        }
        params.push((c, v));
    }
    Ok(Some(Words {
        code: (letter, code),
        params,
    }))
}

/// Parses the emitted dialect: `G0 G1 G20 G21 G28 G90 G91 G92 M82 M83 M104
/// M109`, with `;` comments. Other commands are kept as warnings.
pub fn parse(text: &str) -> Result<ParsedProgram> {
    let mut prog = ParsedProgram::default();
    let mut state = ModalState::default();
    let mut pos = [0.0f64; 3];
    let mut e_pos = 0.0f64;
    let mut layer = None;
    let mut tag = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (code_part, comment) = match raw.split_once(';') {
            Some((c, m)) => (c, Some(m.trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(v) = c.strip_prefix("LAYER:") {
                layer = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| syntax(line, format!("malformed layer comment {c:?}")))?,
                );
            } else if let Some(v) = c.strip_prefix("TYPE:") {
                tag = match v.trim() {
                    "COIL" => Some(SegmentKind::CoilExtrude),
                    "PLOT" => Some(SegmentKind::PlotExtrude),
                    _ => tag,
                };
            }
        }
        let Some(w) = words(line, code_part)? else {
            continue;
        };
        let before = state;
        match w.code {
            ('G', 0) | ('G', 1) => {
                let mut to = pos;
                for (axis, c) in ['X', 'Y', 'Z'].into_iter().enumerate() {
                    if let Some(v) = w.get(c) {
                        let v = v * state.unit;
                        to[axis] = if state.absolute_xyz { v } else { pos[axis] + v };
                    }
                }
                if let Some(f) = w.get('F') {
                    if !(f > 0.0) {
                        return Err(syntax(line, format!("feed {f} must be positive")));
                    }
                    state.feed = Some(f * state.unit);
                }
                let e = match w.get('E') {
                    Some(v) if state.absolute_e => {
                        let d = v - e_pos;
                        e_pos = v;
                        Some(d)
                    }
                    Some(v) => {
                        e_pos += v;
                        Some(v)
                    }
                    None => None,
                };
                prog.moves.push(Move {
                    line,
                    rapid: w.code.1 == 0,
                    from: pos,
                    to,
                    e: e.unwrap_or(0.0),
                    extrudes: e.is_some() && w.code.1 == 1,
                    feed: state.feed.unwrap_or(0.0),
                    layer,
                    tag,
                });
                pos = to;
            }
            ('G', 20) => state.unit = 25.4,
            ('G', 21) => state.unit = 1.0,
            ('G', 28) => pos = [0.0; 3],
            ('G', 90) => state.absolute_xyz = true,
            ('G', 91) => state.absolute_xyz = false,
            ('G', 92) => {
                for (axis, c) in ['X', 'Y', 'Z'].into_iter().enumerate() {
                    if let Some(v) = w.get(c) {
                        pos[axis] = v * state.unit;
                    }
                }
                if let Some(v) = w.get('E') {
                    e_pos = v;
                }
            }
            ('M', 82) => state.absolute_e = true,
            ('M', 83) => state.absolute_e = false,
            ('M', 104) | ('M', 109) => {
                let s = w
                    .get('S')
                    .ok_or_else(|| syntax(line, "temperature command without S"))?;
                state.temperature = Some(s);
            }
            (c, n) => prog.warnings.push(Warning {
                line,
                message: format!("ignored unsupported command {c}{n}"),
            }),
        }
        if state != before {
            prog.modal.push(ModalChange { line, state });
        }
    }
    Ok(prog)
}
