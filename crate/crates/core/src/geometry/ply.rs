//! Minimal PLY reader/writer for voxelized geometry.
//!
//! Reads `ascii` and `binary_little_endian` files, keeping only the `x`, `y`,
//! `z` properties of the `vertex` element. Every other element and property
//! (including lists) is parsed and skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::cloud::{depth_for, Point, VoxelCloud, MAX_DEPTH};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

const DEPTH_COMMENT: &str = "bit_depth";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "char" | "int8" => ScalarType::I8,
            "uchar" | "uint8" => ScalarType::U8,
            "short" | "int16" => ScalarType::I16,
            "ushort" | "uint16" => ScalarType::U16,
            "int" | "int32" => ScalarType::I32,
            "uint" | "uint32" => ScalarType::U32,
            "float" | "float32" => ScalarType::F32,
            "double" | "float64" => ScalarType::F64,
            other => return Err(Error::PlyFormat(format!("unknown property type {other:?}"))),
        })
    }

    fn size(self) -> usize {
        match self {
            ScalarType::I8 | ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::I32 | ScalarType::U32 | ScalarType::F32 => 4,
            ScalarType::F64 => 8,
        }
    }

    fn decode_le(self, b: &[u8]) -> f64 {
        match self {
            ScalarType::I8 => b[0] as i8 as f64,
            ScalarType::U8 => b[0] as f64,
            ScalarType::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            ScalarType::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            ScalarType::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            ScalarType::U32 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            ScalarType::F32 => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            ScalarType::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug)]
enum Property {
    Scalar { name: String, ty: ScalarType },
    List { count: ScalarType, item: ScalarType },
}

#[derive(Debug)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

#[derive(Debug)]
struct Header {
    format: PlyFormat,
    elements: Vec<Element>,
    depth: Option<u32>,
}

fn read_line<R: BufRead>(r: &mut R) -> Result<String> {
    let mut buf = Vec::new();
    if r.read_until(b'\n', &mut buf)? == 0 {
        return Err(Error::PlyFormat("unexpected end of header".into()));
    }
    let line = String::from_utf8(buf).map_err(|_| Error::PlyFormat("header is not UTF-8".into()))?;
    Ok(line.trim_end_matches(['\n', '\r']).to_string())
}

fn parse_header<R: BufRead>(r: &mut R) -> Result<Header> {
    if read_line(r)?.trim() != "ply" {
        return Err(Error::PlyFormat("missing 'ply' magic".into()));
    }
    let mut format = None;
    let mut depth = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let line = read_line(r)?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            ["end_header"] => break,
            ["format", fmt, _version] => {
                format = Some(match *fmt {
                    "ascii" => PlyFormat::Ascii,
                    "binary_little_endian" => PlyFormat::BinaryLittleEndian,
                    other => return Err(Error::PlyUnsupported(format!("format {other}"))),
                })
            }
            ["comment", DEPTH_COMMENT, d] => depth = d.parse().ok(),
            ["comment", ..] | ["obj_info", ..] => {}
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count
                    .parse()
                    .map_err(|_| Error::PlyFormat(format!("bad element count {count:?}")))?,
                properties: Vec::new(),
            }),
            ["property", "list", count, item, _name] => elements
                .last_mut()
                .ok_or_else(|| Error::PlyFormat("property before element".into()))?
                .properties
                .push(Property::List { count: ScalarType::parse(count)?, item: ScalarType::parse(item)? }),
            ["property", ty, name] => elements
                .last_mut()
                .ok_or_else(|| Error::PlyFormat("property before element".into()))?
                .properties
                .push(Property::Scalar { name: name.to_string(), ty: ScalarType::parse(ty)? }),
            _ => return Err(Error::PlyFormat(format!("unrecognised header line {line:?}"))),
        }
    }
    let format = format.ok_or_else(|| Error::PlyFormat("missing format line".into()))?;
    Ok(Header { format, elements, depth })
}

/// Positions of x, y, z among the vertex element's properties.
fn xyz_slots(el: &Element) -> Result<[usize; 3]> {
    let find = |axis: &str| {
        el.properties
            .iter()
            .position(|p| matches!(p, Property::Scalar { name, .. } if name == axis))
            .ok_or_else(|| Error::PlyUnsupported(format!("vertex element lacks scalar property {axis}")))
    };
    Ok([find("x")?, find("y")?, find("z")?])
}

fn read_ascii_body<R: Read>(r: &mut R, header: &Header) -> Result<Vec<[f64; 3]>> {
    let mut body = String::new();
    r.read_to_string(&mut body)
        .map_err(|_| Error::PlyFormat("ascii body is not UTF-8".into()))?;
    let mut tokens = body.split_ascii_whitespace();
    let mut next = |what: &str| -> Result<f64> {
        let tok = tokens.next().ok_or_else(|| Error::PlyFormat(format!("truncated body reading {what}")))?;
        tok.parse::<f64>().map_err(|_| Error::PlyFormat(format!("bad number {tok:?}")))
    };
    let mut out = Vec::new();
    for el in &header.elements {
        let slots = if el.name == "vertex" { Some(xyz_slots(el)?) } else { None };
        for _ in 0..el.count {
            let mut xyz = [0.0; 3];
            for (pi, prop) in el.properties.iter().enumerate() {
                match prop {
                    Property::Scalar { .. } => {
                        let v = next(&el.name)?;
                        if let Some(axis) = slots.and_then(|s| s.iter().position(|&k| k == pi)) {
                            xyz[axis] = v;
                        }
                    }
                    Property::List { .. } => {
                        let n = next(&el.name)?;
                        for _ in 0..n as usize {
                            next(&el.name)?;
                        }
                    }
                }
            }
            if slots.is_some() {
                out.push(xyz);
            }
        }
    }
    Ok(out)
}

fn read_binary_body<R: Read>(r: &mut R, header: &Header) -> Result<Vec<[f64; 3]>> {
    let mut buf = [0u8; 8];
    let mut read_scalar = |r: &mut R, ty: ScalarType| -> Result<f64> {
        r.read_exact(&mut buf[..ty.size()])
            .map_err(|_| Error::PlyFormat("truncated binary body".into()))?;
        Ok(ty.decode_le(&buf))
    };
    let mut out = Vec::new();
    for el in &header.elements {
        let slots = if el.name == "vertex" { Some(xyz_slots(el)?) } else { None };
        for _ in 0..el.count {
            let mut xyz = [0.0; 3];
            for (pi, prop) in el.properties.iter().enumerate() {
                match *prop {
                    Property::Scalar { ty, .. } => {
                        let v = read_scalar(r, ty)?;
                        if let Some(axis) = slots.and_then(|s| s.iter().position(|&k| k == pi)) {
                            xyz[axis] = v;
                        }
                    }
                    Property::List { count, item } => {
                        let n = read_scalar(r, count)?;
                        for _ in 0..n as usize {
                            read_scalar(r, item)?;
                        }
                    }
                }
            }
            if slots.is_some() {
                out.push(xyz);
            }
        }
    }
    Ok(out)
}

/// Parses a PLY stream into a voxel cloud.
///
/// Coordinates are rounded half-up, clamped into `[0, 2^depth - 1]` and
/// deduplicated. When `depth` is `None`, a `comment bit_depth N` header line
/// is honoured, otherwise the smallest fitting depth is inferred.
pub fn read_ply<R: BufRead>(mut reader: R, depth: Option<u32>) -> Result<VoxelCloud> {
    let header = parse_header(&mut reader)?;
    if !header.elements.iter().any(|e| e.name == "vertex") {
        return Err(Error::PlyUnsupported("no vertex element".into()));
    }
    let raw = match header.format {
        PlyFormat::Ascii => read_ascii_body(&mut reader, &header)?,
        PlyFormat::BinaryLittleEndian => read_binary_body(&mut reader, &header)?,
    };
    let limit = 1i64 << MAX_DEPTH;
    let mut pts: Vec<Point> = Vec::with_capacity(raw.len());
    let mut max = 0i64;
    for xyz in raw {
        let mut p = [0i32; 3];
        for i in 0..3 {
            if !xyz[i].is_finite() {
                return Err(Error::PlyFormat(format!("non-finite coordinate {}", xyz[i])));
            }
            let c = (xyz[i] + 0.5).floor();
            if c >= limit as f64 {
                return Err(Error::CoordinateOverflow { value: c as i64, max_depth: MAX_DEPTH });
            }
            p[i] = c.max(0.0) as i32;
            max = max.max(p[i] as i64);
        }
        pts.push(p);
    }
    let depth = match depth.or(header.depth) {
        Some(d) if d == 0 || d > MAX_DEPTH => {
            return Err(Error::CoordinateOverflow { value: max, max_depth: MAX_DEPTH })
        }
        Some(d) => d,
        None => depth_for(max as u32),
    };
    let cap = (1i32 << depth) - 1;
    for p in &mut pts {
        for c in p.iter_mut() {
            *c = (*c).min(cap);
        }
    }
    VoxelCloud::new(pts, depth)
}

pub fn load_ply(path: impl AsRef<Path>, depth: Option<u32>) -> Result<VoxelCloud> {
    read_ply(BufReader::new(File::open(path)?), depth)
}

/// Writes `cloud` using the narrowest unsigned integer property type that
/// holds every coordinate.
pub fn write_ply<W: Write>(cloud: &VoxelCloud, format: PlyFormat, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let max = cloud.iter().flat_map(|p| p.iter().copied()).max().unwrap_or(0) as u32;
    let (ty, width) = if max <= u8::MAX as u32 {
        ("uchar", 1)
    } else if max <= u16::MAX as u32 {
        ("ushort", 2)
    } else {
        ("uint", 4)
    };
    let fmt = match format {
        PlyFormat::Ascii => "ascii",
        PlyFormat::BinaryLittleEndian => "binary_little_endian",
    };
    write!(
        w,
        "ply\nformat {fmt} 1.0\ncomment {DEPTH_COMMENT} {}\nelement vertex {}\n\
         property {ty} x\nproperty {ty} y\nproperty {ty} z\nend_header\n",
        cloud.depth(),
        cloud.len()
    )?;
    match format {
        PlyFormat::Ascii => {
            for p in cloud.iter() {
                writeln!(w, "{} {} {}", p[0], p[1], p[2])?;
            }
        }
        PlyFormat::BinaryLittleEndian => {
            for p in cloud.iter() {
                for &c in p {
                    let bytes = (c as u32).to_le_bytes();
                    w.write_all(&bytes[..width])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_ply(cloud: &VoxelCloud, format: PlyFormat, path: impl AsRef<Path>) -> Result<()> {
    write_ply(cloud, format, File::create(path)?)
}
