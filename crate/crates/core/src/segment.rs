//! Two-label image segmentation by minimum cut on the pixel grid.
//!
//! Bright seed pixels are sources, dark seed pixels are sinks, and
//! neighbouring pixels are joined by edges whose capacity falls with their
//! intensity difference. The pixels on the source side of a minimum cut
//! form the foreground mask.

use thiserror::Error;

use crate::flow_base::{Capacities, FlowNetwork};
use crate::generate::rect_grid;
use crate::solver::{SolveError, Solver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("not a PGM image (magic '{0}')")]
    Magic(String),
    #[error("bad or missing header field: {0}")]
    Header(&'static str),
    #[error("pixel data truncated: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample {value} exceeds maximum {maxval}")]
    Range { value: u32, maxval: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples.
    pub pixels: Vec<u16>,
}

/// Reads a binary (`P5`) or plain (`P2`) greymap.
pub fn parse_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    let mut pos = 0;
    let token = |pos: &mut usize| -> Option<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = token(&mut pos).unwrap_or_default();
    if magic != "P5" && magic != "P2" {
        return Err(PgmError::Magic(magic));
    }
    let field = |name: &'static str, pos: &mut usize| -> Result<u32, PgmError> {
        token(pos)
            .and_then(|t| t.parse().ok())
            .ok_or(PgmError::Header(name))
    };
    let width = field("width", &mut pos)? as usize;
    let height = field("height", &mut pos)? as usize;
    let maxval = field("maxval", &mut pos)?;
    if width == 0 || height == 0 {
        return Err(PgmError::Header("dimensions"));
    }
    if maxval == 0 || maxval > u16::MAX as u32 {
        return Err(PgmError::Header("maxval"));
    }
    let expected = width * height;
    let mut pixels = Vec::with_capacity(expected);
    if magic == "P5" {
        let data = &bytes[(pos + 1).min(bytes.len())..];
        let wide = maxval > 255;
        let step = if wide { 2 } else { 1 };
        let found = data.len() / step;
        if found < expected {
            return Err(PgmError::Truncated { expected, found });
        }
        for i in 0..expected {
            pixels.push(if wide {
                u16::from_be_bytes([data[2 * i], data[2 * i + 1]])
            } else {
                data[i] as u16
            });
        }
    } else {
        while pixels.len() < expected {
            match token(&mut pos) {
                None => {
                    return Err(PgmError::Truncated {
                        expected,
                        found: pixels.len(),
                    })
                }
                Some(t) => pixels.push(t.parse().map_err(|_| PgmError::Header("sample"))?),
            }
        }
    }
    if let Some(&v) = pixels.iter().find(|&&v| v as u32 > maxval) {
        return Err(PgmError::Range {
            value: v as u32,
            maxval,
        });
    }
    Ok(Image {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

/// Binary greymap bytes.
pub fn write_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    for &p in &img.pixels {
        if img.maxval > 255 {
            out.extend(p.to_be_bytes());
        } else {
            out.push(p as u8);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentParams {
    /// Pixels at least this bright are foreground seeds.
    pub foreground: u16,
    /// Pixels at most this bright are background seeds.
    pub background: u16,
    /// Weight of keeping similar neighbours together.
    pub smoothness: u32,
}

impl Default for SegmentParams {
    fn default() -> Self {
        SegmentParams {
            foreground: 230,
            background: 25,
            smoothness: 8,
        }
    }
}

/// Pixel grid network: capacity `1 + smoothness * (maxval - |a - b|) / maxval`
/// in both directions between 4-neighbours.
pub fn segmentation_network(img: &Image, params: &SegmentParams) -> FlowNetwork<i64> {
    let graph = rect_grid(img.width, img.height);
    let maxval = img.maxval as i64;
    let mut caps = Vec::with_capacity(graph.dart_count());
    for &(u, v) in graph.edges() {
        let diff = (img.pixels[u] as i64 - img.pixels[v] as i64).abs();
        let c = 1 + params.smoothness as i64 * (maxval - diff) / maxval;
        caps.extend([c, c]);
    }
    let capacity = Capacities::new(caps).expect("capacities are positive");
    let sources = (0..img.pixels.len())
        .filter(|&p| img.pixels[p] >= params.foreground)
        .collect();
    let sinks = (0..img.pixels.len())
        .filter(|&p| img.pixels[p] <= params.background && img.pixels[p] < params.foreground)
        .collect();
    FlowNetwork::new(graph, capacity, sources, sinks).expect("seed sets are disjoint")
}

#[derive(Debug, Clone)]
pub struct Segmentation {
    /// 255 on the foreground side of the cut, 0 elsewhere.
    pub mask: Image,
    pub cut_value: i64,
    pub foreground_seeds: usize,
    pub background_seeds: usize,
}

pub fn segment(img: &Image, params: &SegmentParams, solver: &Solver) -> Result<Segmentation, SolveError> {
    let net = segmentation_network(img, params);
    let sol = solver.solve(&net)?;
    let pixels = sol
        .cut
        .reachable
        .iter()
        .map(|&r| if r { 255 } else { 0 })
        .collect();
    Ok(Segmentation {
        mask: Image {
            width: img.width,
            height: img.height,
            maxval: 255,
            pixels,
        },
        cut_value: sol.value,
        foreground_seeds: net.sources.len(),
        background_seeds: net.sinks.len(),
    })
}
