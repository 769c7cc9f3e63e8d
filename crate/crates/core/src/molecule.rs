//! Nuclear geometry: XYZ parsing, the soft-core nuclear potential, nuclear
//! repulsion and starting orbitals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Grid};
use crate::orbitals::OrbitalVector;

/// Bohr per ångström.
pub const BOHR_PER_ANGSTROM: f64 = 1.8897261246;

/// Smallest allowed distance between a nucleus and the box boundary.
pub const BOX_MARGIN: f64 = 2.0;

const ELEMENTS: [&str; 18] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar",
];

/// Nuclear charge of an element symbol (case-insensitive), `H` through `Ar`.
pub fn nuclear_charge(symbol: &str) -> Option<f64> {
    ELEMENTS
        .iter()
        .position(|e| e.eq_ignore_ascii_case(symbol))
        .map(|z| (z + 1) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub symbol: String,
    pub charge: f64,
    /// Position in bohr.
    pub position: [f64; 3],
}

impl Atom {
    /// Atom of a known element at `position` (bohr).
    pub fn new(symbol: &str, position: [f64; 3]) -> Result<Self> {
        let charge = nuclear_charge(symbol).ok_or_else(|| Error::UnknownElement(symbol.into()))?;
        Ok(Self {
            symbol: canonical_symbol(symbol),
            charge,
            position,
        })
    }
}

fn canonical_symbol(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for (i, c) in s.chars().enumerate() {
        if i == 0 {
            out.extend(c.to_uppercase());
        } else {
            out.extend(c.to_lowercase());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Empty("molecule"));
        }
        for a in &atoms {
            if !(a.charge > 0.0) || a.position.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "atom",
                    reason: format!("{} has charge {} at {:?}", a.symbol, a.charge, a.position),
                });
            }
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total nuclear charge, which is the electron count of the neutral molecule.
    pub fn total_charge(&self) -> f64 {
        self.atoms.iter().map(|a| a.charge).sum()
    }

    /// Doubly occupied orbitals of the neutral closed-shell molecule.
    pub fn closed_shell_orbitals(&self) -> usize {
        (self.total_charge() / 2.0).floor() as usize
    }

    /// Unweighted mean of the nuclear positions.
    pub fn centroid(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for a in &self.atoms {
            for (sum, x) in c.iter_mut().zip(a.position) {
                *sum += x;
            }
        }
        c.map(|v| v / self.atoms.len() as f64)
    }

    pub fn translated(&self, shift: [f64; 3]) -> Molecule {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                position: [0, 1, 2].map(|d| a.position[d] + shift[d]),
                ..a.clone()
            })
            .collect();
        Molecule { atoms }
    }

    /// Copy moved so its centroid sits at the origin.
    pub fn centered(&self) -> Molecule {
        self.translated(self.centroid().map(|c| -c))
    }

    /// H₂ with the given bond length, along x and centered.
    pub fn h2(bond: f64) -> Molecule {
        Self::built(&[
            ("H", [-0.5 * bond, 0.0, 0.0]),
            ("H", [0.5 * bond, 0.0, 0.0]),
        ])
    }

    /// Bent H-He-H with 1.81 bohr bonds and a 104.5° angle, He at the origin.
    pub fn h2he() -> Molecule {
        let half = 0.5 * 104.5f64.to_radians();
        let (r, c, s) = (1.81, half.cos(), half.sin());
        Self::built(&[
            ("He", [0.0, 0.0, 0.0]),
            ("H", [r * s, r * c, 0.0]),
            ("H", [-r * s, r * c, 0.0]),
        ])
    }

    /// Linear H-Be-H, H-H distance 5.013 bohr.
    pub fn h2be() -> Molecule {
        Self::built(&[
            ("H", [-2.5065, 0.0, 0.0]),
            ("Be", [0.0, 0.0, 0.0]),
            ("H", [2.5065, 0.0, 0.0]),
        ])
    }

    /// N₂ at 2.074 bohr.
    pub fn n2() -> Molecule {
        Self::built(&[("N", [-1.037, 0.0, 0.0]), ("N", [1.037, 0.0, 0.0])])
    }

    fn built(spec: &[(&str, [f64; 3])]) -> Molecule {
        Molecule {
            atoms: spec
                .iter()
                .map(|(s, p)| Atom::new(s, *p).expect("known element"))
                .collect(),
        }
    }
}

/// Parse XYZ text: atom count, a comment line, then `symbol x y z` rows.
///
/// Coordinates are bohr unless the comment line contains the word
/// `angstrom` (any case).
pub fn load_molecule(text: &str) -> Result<Molecule> {
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse {
        line: line + 1,
        message,
    };
    let (no, count_line) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing atom count".into()))?;
    let count: usize = count_line.trim().parse().map_err(|_| {
        parse_err(
            no,
            format!("expected atom count, found `{}`", count_line.trim()),
        )
    })?;
    let comment = lines.next().map(|(_, l)| l).unwrap_or("");
    let scale = if comment
        .split(|c: char| !c.is_ascii_alphabetic())
        .any(|w| w.eq_ignore_ascii_case("angstrom"))
    {
        BOHR_PER_ANGSTROM
    } else {
        1.0
    };

    let mut atoms = Vec::with_capacity(count);
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if atoms.len() == count {
            return Err(parse_err(no, format!("more than {count} atom rows")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(parse_err(
                no,
                format!("expected `symbol x y z`, found `{line}`"),
            ));
        }
        let mut position = [0.0; 3];
        for d in 0..3 {
            position[d] = fields[d + 1]
                .parse::<f64>()
                .map_err(|_| parse_err(no, format!("bad coordinate `{}`", fields[d + 1])))?
                * scale;
        }
        atoms.push(Atom::new(fields[0], position)?);
    }
    if atoms.len() != count {
        return Err(parse_err(
            text.lines().count().saturating_sub(1),
            format!("expected {count} atoms, found {}", atoms.len()),
        ));
    }
    Molecule::new(atoms)
}

fn minimum_image(d: f64, box_length: f64) -> f64 {
    d - box_length * (d / box_length).round()
}

/// Soft-core nuclear potential `−Σ Z / √(r² + s²)`, with `r` the
/// minimum-image distance to each nucleus.
pub fn nuclear_potential(mol: &Molecule, grid: &Grid, softening: f64) -> Result<Field> {
    if !(softening > 0.0 && softening.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "softening",
            reason: format!("must be positive, got {softening}"),
        });
    }
    let half = 0.5 * grid.box_length();
    for (index, a) in mol.atoms.iter().enumerate() {
        let margin = a
            .position
            .iter()
            .map(|c| half - c.abs())
            .fold(f64::INFINITY, f64::min);
        if margin < BOX_MARGIN {
            return Err(Error::AtomOutsideBox {
                index,
                symbol: a.symbol.clone(),
                margin,
            });
        }
    }
    let l = grid.box_length();
    let s2 = softening * softening;
    let atoms = &mol.atoms;
    Field::sample(grid, |x, y, z| {
        let p = [x, y, z];
        -atoms
            .iter()
            .map(|a| {
                let r2: f64 = (0..3)
                    .map(|d| minimum_image(p[d] - a.position[d], l).powi(2))
                    .sum();
                a.charge / (r2 + s2).sqrt()
            })
            .sum::<f64>()
    })
}

/// `Σ_{a<b} Z_a Z_b / |R_a − R_b|`.
pub fn nuclear_repulsion(mol: &Molecule) -> Result<f64> {
    let mut e = 0.0;
    for (i, a) in mol.atoms.iter().enumerate() {
        for (j, b) in mol.atoms.iter().enumerate().skip(i + 1) {
            let r = (0..3)
                .map(|d| (a.position[d] - b.position[d]).powi(2))
                .sum::<f64>()
                .sqrt();
            if r < 1e-8 {
                return Err(Error::CoincidentAtoms(i, j));
            }
            e += a.charge * b.charge / r;
        }
    }
    Ok(e)
}

/// How to build the starting orbitals.
#[derive(Clone, Debug, PartialEq)]
pub enum GuessSpec {
    /// Each orbital is ten unit-width Gaussians of alternating sign at
    /// centers drawn uniformly from a cube of side `center_box` around the
    /// centroid.
    RandomGaussians { seed: u64, center_box: f64 },
    /// Gaussians on the nuclei. Orbital `k` sits on atom `k mod M` and uses
    /// shell `k / M` from the sequence s, s, p_x, p_y, p_z (repeating with
    /// wider Gaussians). Shell `k` takes exponent `widths[k % widths.len()]`.
    AtomicGaussians { widths: Vec<f64> },
}

/// Gaussians per random orbital.
pub const RANDOM_GAUSSIAN_COUNT: usize = 10;

impl GuessSpec {
    pub fn random(seed: u64) -> Self {
        Self::RandomGaussians {
            seed,
            center_box: 4.0,
        }
    }

    pub fn atomic() -> Self {
        Self::AtomicGaussians {
            widths: vec![1.0, 0.3, 0.5],
        }
    }
}

/// Starting orbitals, Löwdin-orthonormalized.
pub fn initial_guess(
    spec: &GuessSpec,
    mol: &Molecule,
    grid: &Grid,
    n: usize,
) -> Result<OrbitalVector> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n_orbitals",
            reason: "must be at least 1".into(),
        });
    }
    let raw = match spec {
        GuessSpec::RandomGaussians { seed, center_box } => {
            if !(*center_box > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "center_box",
                    reason: format!("must be positive, got {center_box}"),
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let c0 = mol.centroid();
            let fields: Result<Vec<Field>> = (0..n)
                .map(|_| {
                    let centers: Vec<[f64; 3]> = (0..RANDOM_GAUSSIAN_COUNT)
                        .map(|_| {
                            [0, 1, 2].map(|d| c0[d] + center_box * (rng.random::<f64>() - 0.5))
                        })
                        .collect();
                    Field::sample(grid, |x, y, z| {
                        centers
                            .iter()
                            .enumerate()
                            .map(|(j, c)| {
                                let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                                let r2 =
                                    (x - c[0]).powi(2) + (y - c[1]).powi(2) + (z - c[2]).powi(2);
                                sign * (-r2).exp()
                            })
                            .sum()
                    })
                })
                .collect();
            fields?
        }
        GuessSpec::AtomicGaussians { widths } => {
            if widths.is_empty() || widths.iter().any(|w| !(*w > 0.0)) {
                return Err(Error::InvalidParameter {
                    name: "widths",
                    reason: "need at least one positive exponent".into(),
                });
            }
            let atoms = mol.atoms();
            let fields: Result<Vec<Field>> = (0..n)
                .map(|k| {
                    let atom = &atoms[k % atoms.len()];
                    let shell = k / atoms.len();
                    let kind = shell % 5;
                    let alpha = widths[shell % widths.len()] / (1 + shell / 5) as f64;
                    let c = atom.position;
                    Field::sample(grid, |x, y, z| {
                        let d = [x - c[0], y - c[1], z - c[2]];
                        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                        let angular = match kind {
                            0 | 1 => 1.0,
                            p => d[p - 2],
                        };
                        angular * (-alpha * r2).exp()
                    })
                })
                .collect();
            fields?
        }
    };
    OrbitalVector::new(raw)?
        .lowdin_orthonormalize()
        .map_err(|e| match e {
            Error::SingularOverlap { min_eigenvalue } => Error::DegenerateGuess { min_eigenvalue },
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_h2() {
        let m = load_molecule("2\n\nH 0 0 0\nH 0 0 1.4").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.atoms()[1].position, [0.0, 0.0, 1.4]);
        assert_eq!(m.total_charge(), 2.0);
    }

    #[test]
    fn parse_angstrom_and_errors() {
        let m = load_molecule("1\nunits: Angstrom\nhe 1 0 0\n").unwrap();
        assert_eq!(m.atoms()[0].symbol, "He");
        assert!((m.atoms()[0].position[0] - BOHR_PER_ANGSTROM).abs() < 1e-15);
        assert!(matches!(
            load_molecule("1\n\nXx 0 0 0"),
            Err(Error::UnknownElement(_))
        ));
        assert!(matches!(
            load_molecule("2\n\nH 0 0 0\nH 0 zero 0"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            load_molecule("two\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_molecule("3\n\nH 0 0 0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn benchmark_geometries() {
        let n2 = Molecule::n2();
        assert_eq!(n2.total_charge(), 14.0);
        let d = n2.atoms()[1].position[0] - n2.atoms()[0].position[0];
        assert!((d - 2.074).abs() < 1e-12);
        let hbe = Molecule::h2be();
        assert_eq!(hbe.len(), 3);
        assert!((hbe.atoms()[2].position[0] - hbe.atoms()[0].position[0] - 5.013).abs() < 1e-12);
        let hhe = Molecule::h2he();
        for h in &hhe.atoms()[1..] {
            let r = h.position.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((r - 1.81).abs() < 1e-12);
        }
    }

    #[test]
    fn repulsion_values() {
        assert!((nuclear_repulsion(&Molecule::h2(1.4)).unwrap() - 1.0 / 1.4).abs() < 1e-15);
        let one = Molecule::new(vec![Atom::new("He", [0.0; 3]).unwrap()]).unwrap();
        assert_eq!(nuclear_repulsion(&one).unwrap(), 0.0);
        let e = nuclear_repulsion(&Molecule::h2be()).unwrap();
        assert!((e - (8.0 / 2.5065 + 1.0 / 5.013)).abs() < 1e-13);
        let twin = Molecule::new(vec![Atom::new("H", [0.0; 3]).unwrap(); 2]).unwrap();
        assert!(matches!(
            nuclear_repulsion(&twin),
            Err(Error::CoincidentAtoms(0, 1))
        ));
    }

    #[test]
    fn soft_core_values() {
        let grid = Grid::new(12.0, 24).unwrap();
        let h = Molecule::new(vec![Atom::new("H", [0.0; 3]).unwrap()]).unwrap();
        let v = nuclear_potential(&h, &grid, 0.1).unwrap();
        let n = 24;
        let origin = n / 2 + n * (n / 2 + n * (n / 2));
        assert!((v.values()[origin] + 10.0).abs() < 1e-12);
        // x = 3 is six lattice steps from the origin
        assert!((v.values()[origin + 6] + 1.0 / 9.01f64.sqrt()).abs() < 1e-14);
        assert!(v.values().iter().all(|&x| x < 0.0));
    }

    #[test]
    fn atoms_near_boundary_rejected() {
        let grid = Grid::new(8.0, 16).unwrap();
        let m = Molecule::new(vec![Atom::new("H", [2.5, 0.0, 0.0]).unwrap()]).unwrap();
        assert!(matches!(
            nuclear_potential(&m, &grid, 0.5),
            Err(Error::AtomOutsideBox { index: 0, .. })
        ));
        assert!(nuclear_potential(&Molecule::h2(1.4), &grid, 0.0).is_err());
    }

    #[test]
    fn random_guess_is_orthonormal_and_seeded() {
        let grid = Grid::new(16.0, 24).unwrap();
        let mol = Molecule::h2be();
        let a = initial_guess(&GuessSpec::random(3), &mol, &grid, 3).unwrap();
        assert!(a.orthonormality_defect() < 1e-10);
        let b = initial_guess(&GuessSpec::random(3), &mol, &grid, 3).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.values(), y.values());
        }
        let c = initial_guess(&GuessSpec::random(4), &mol, &grid, 3).unwrap();
        assert_ne!(a.get(0).values(), c.get(0).values());
    }

    #[test]
    fn atomic_guess_covers_shells() {
        let grid = Grid::new(16.0, 24).unwrap();
        let phi = initial_guess(&GuessSpec::atomic(), &Molecule::n2(), &grid, 7).unwrap();
        assert_eq!(phi.len(), 7);
        assert!(phi.orthonormality_defect() < 1e-10);
    }
}
