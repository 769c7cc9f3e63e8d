//! Raw orbital dumps: little-endian `f64` samples in x-fastest order, with a
//! small `key = value` text sidecar describing the grid.

use std::fs;
use std::path::{Path, PathBuf};

use super::{Field, Grid};
use crate::error::{Error, Result};

/// Parsed contents of an orbital sidecar header.
#[derive(Clone, Debug, PartialEq)]
pub struct DumpHeader {
    pub box_length: f64,
    pub points_per_axis: usize,
    pub orbital_index: usize,
    pub byte_order: String,
}

impl DumpHeader {
    fn render(&self) -> String {
        format!(
            "box_length = {:?}\npoints_per_axis = {}\norbital_index = {}\nbyte_order = {}\n\
             dtype = f64\nsample_order = x-fastest\n",
            self.box_length, self.points_per_axis, self.orbital_index, self.byte_order
        )
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |message: String| Error::Dump {
            path: path.to_path_buf(),
            message,
        };
        let (mut box_length, mut n, mut index, mut order) = (None, None, None, None);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("malformed header line `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "box_length" => {
                    box_length = Some(value.parse::<f64>().map_err(|e| err(e.to_string()))?)
                }
                "points_per_axis" => {
                    n = Some(value.parse::<usize>().map_err(|e| err(e.to_string()))?)
                }
                "orbital_index" => {
                    index = Some(value.parse::<usize>().map_err(|e| err(e.to_string()))?)
                }
                "byte_order" => order = Some(value.to_string()),
                _ => {}
            }
        }
        Ok(Self {
            box_length: box_length.ok_or_else(|| err("missing box_length".into()))?,
            points_per_axis: n.ok_or_else(|| err("missing points_per_axis".into()))?,
            orbital_index: index.ok_or_else(|| err("missing orbital_index".into()))?,
            byte_order: order.ok_or_else(|| err("missing byte_order".into()))?,
        })
    }
}

fn paths(dir: &Path, index: usize) -> (PathBuf, PathBuf) {
    (
        dir.join(format!("orbital_{index:03}.bin")),
        dir.join(format!("orbital_{index:03}.txt")),
    )
}

/// Write `field` as orbital `index` into `dir`; returns the binary path.
pub fn write_orbital_dump(dir: &Path, index: usize, field: &Field) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (bin, txt) = paths(dir, index);
    let bytes: Vec<u8> = field
        .values()
        .iter()
        .flat_map(|v| v.to_le_bytes())
        .collect();
    fs::write(&bin, bytes)?;
    let header = DumpHeader {
        box_length: field.grid().box_length(),
        points_per_axis: field.grid().points_per_axis(),
        orbital_index: index,
        byte_order: "little-endian".into(),
    };
    fs::write(&txt, header.render())?;
    Ok(bin)
}

/// Read orbital `index` from `dir`, rebuilding its grid from the sidecar.
pub fn read_orbital_dump(dir: &Path, index: usize) -> Result<(DumpHeader, Field)> {
    let (bin, txt) = paths(dir, index);
    let header = DumpHeader::parse(&fs::read_to_string(&txt)?, &txt)?;
    if header.byte_order != "little-endian" {
        return Err(Error::Dump {
            path: txt,
            message: format!("unsupported byte order `{}`", header.byte_order),
        });
    }
    let grid = Grid::new(header.box_length, header.points_per_axis)?;
    let bytes = fs::read(&bin)?;
    if bytes.len() != 8 * grid.len() {
        return Err(Error::Dump {
            path: bin,
            message: format!("expected {} bytes, found {}", 8 * grid.len(), bytes.len()),
        });
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((header, Field::from_values(&grid, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new(9.5, 8).unwrap();
        let f = Field::sample(&grid, |x, y, z| x - 2.0 * y + z * z).unwrap();
        let bin = write_orbital_dump(dir.path(), 3, &f).unwrap();
        assert_eq!(std::fs::metadata(&bin).unwrap().len(), 8 * 512);
        let (header, back) = read_orbital_dump(dir.path(), 3).unwrap();
        assert_eq!(header.orbital_index, 3);
        assert_eq!(header.byte_order, "little-endian");
        assert_eq!(back.grid(), &grid);
        assert_eq!(back.values(), f.values());
        // first sample is the box corner (-L/2, -L/2, -L/2)
        let first = f64::from_le_bytes(std::fs::read(&bin).unwrap()[..8].try_into().unwrap());
        assert_eq!(first, -4.75 + 9.5 + 4.75 * 4.75);
    }
}
