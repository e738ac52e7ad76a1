//! Union-find connected-component labelling of pixel masks.

use serde::Serialize;

use super::{GridSpec, PixelClassification, RasterError};
use crate::orbits::PointClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn from_count(n: u32) -> Option<Self> {
        match n {
            4 => Some(Connectivity::Four),
            8 => Some(Connectivity::Eight),
            _ => None,
        }
    }

    /// The pairing used for the complement of a set with this connectivity.
    pub fn dual(self) -> Self {
        match self {
            Connectivity::Four => Connectivity::Eight,
            Connectivity::Eight => Connectivity::Four,
        }
    }

    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Connectivity::Eight => &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub id: u32,
    pub pixels: usize,
    /// `[i_min, i_max, j_min, j_max]`, inclusive.
    pub bbox: [usize; 4],
    /// Touches the window edge: a candidate for an unbounded component.
    pub touches_edge: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLabeling {
    pub grid: GridSpec,
    pub connectivity: Connectivity,
    /// Component id per pixel, 0 outside the target.
    pub labels: Vec<u32>,
    /// Sorted by size (descending), ties by id.
    pub census: Vec<ComponentInfo>,
}

impl ComponentLabeling {
    pub fn component_count(&self) -> usize {
        self.census.len()
    }

    pub fn largest(&self) -> Option<&ComponentInfo> {
        self.census.first()
    }

    pub fn edge_touching(&self) -> impl Iterator<Item = &ComponentInfo> {
        self.census.iter().filter(|c| c.touches_edge)
    }
}

struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Labels the `true` pixels of a row-major mask.
///
/// Ids are assigned in row-major order of each component's first pixel,
/// starting at 1.
pub fn label_mask(
    mask: &[bool],
    grid: &GridSpec,
    connectivity: Connectivity,
) -> Result<ComponentLabeling, RasterError> {
    let (nx, ny) = (grid.nx, grid.ny);
    if mask.len() != nx * ny {
        return Err(RasterError::SizeMismatch {
            got: mask.len(),
            want: nx * ny,
        });
    }
    let mut sets = DisjointSets::new(mask.len());
    // Only look at already-visited neighbours (west, north, and the two
    // northern diagonals for 8-connectivity).
    let back: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(-1, 0), (0, -1)],
        Connectivity::Eight => &[(-1, 0), (0, -1), (-1, -1), (1, -1)],
    };
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if !mask[k] {
                continue;
            }
            for &(di, dj) in back {
                let (a, b) = (i as isize + di, j as isize + dj);
                if a < 0 || b < 0 || a as usize >= nx {
                    continue;
                }
                let m = b as usize * nx + a as usize;
                if mask[m] {
                    sets.union(k as u32, m as u32);
                }
            }
        }
    }

    let mut id_of_root = vec![0u32; mask.len()];
    let mut labels = vec![0u32; mask.len()];
    let mut census: Vec<ComponentInfo> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if !mask[k] {
                continue;
            }
            let root = sets.find(k as u32) as usize;
            if id_of_root[root] == 0 {
                census.push(ComponentInfo {
                    id: census.len() as u32 + 1,
                    pixels: 0,
                    bbox: [i, i, j, j],
                    touches_edge: false,
                });
                id_of_root[root] = census.len() as u32;
            }
            let id = id_of_root[root];
            labels[k] = id;
            let info = &mut census[id as usize - 1];
            info.pixels += 1;
            info.bbox = [
                info.bbox[0].min(i),
                info.bbox[1].max(i),
                info.bbox[2].min(j),
                info.bbox[3].max(j),
            ];
            info.touches_edge |= i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
        }
    }
    census.sort_by(|a, b| b.pixels.cmp(&a.pixels).then(a.id.cmp(&b.id)));
    Ok(ComponentLabeling {
        grid: *grid,
        connectivity,
        labels,
        census,
    })
}

/// Components of the pixels classified as `target`. Other classes,
/// including undecided pixels, are background.
pub fn label_components(
    c: &PixelClassification,
    target: PointClass,
    connectivity: Connectivity,
) -> ComponentLabeling {
    label_mask(&c.mask(target), &c.grid, connectivity).expect("classification matches its grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Rect;

    fn grid(nx: usize, ny: usize) -> GridSpec {
        GridSpec::new(Rect::new(0.0, nx as f64, 0.0, ny as f64).unwrap(), nx, ny).unwrap()
    }

    fn parse_mask(rows: &[&str]) -> (Vec<bool>, GridSpec) {
        let mask = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        (mask, grid(rows[0].len(), rows.len()))
    }

    #[test]
    fn two_blobs() {
        let (m, g) = parse_mask(&["##...", "##...", ".....", "...##", "...##"]);
        let l = label_mask(&m, &g, Connectivity::Four).unwrap();
        assert_eq!(l.component_count(), 2);
        assert_eq!(l.labels[0], 1);
        assert_eq!(l.labels[24], 2);
        assert!(l.census.iter().all(|c| c.pixels == 4 && c.touches_edge));
    }

    #[test]
    fn diagonal_contact_depends_on_connectivity() {
        let (m, g) = parse_mask(&["#..", ".#.", "..#"]);
        assert_eq!(
            label_mask(&m, &g, Connectivity::Four)
                .unwrap()
                .component_count(),
            3
        );
        assert_eq!(
            label_mask(&m, &g, Connectivity::Eight)
                .unwrap()
                .component_count(),
            1
        );
    }

    #[test]
    fn u_shape_merges_late() {
        let (m, g) = parse_mask(&["#.#", "#.#", "###"]);
        let l = label_mask(&m, &g, Connectivity::Four).unwrap();
        assert_eq!(l.component_count(), 1);
        assert_eq!(l.census[0].pixels, 7);
        assert_eq!(l.census[0].bbox, [0, 2, 0, 2]);
    }

    #[test]
    fn census_sorted_by_size() {
        let (m, g) = parse_mask(&["#....", ".....", "..###", "..###"]);
        let l = label_mask(&m, &g, Connectivity::Four).unwrap();
        assert_eq!(l.census[0].pixels, 6);
        assert_eq!(l.census[0].id, 2);
        assert_eq!(l.census[1].id, 1);
        assert_eq!(l.largest().unwrap().id, 2);
    }

    #[test]
    fn whole_grid_is_one_component() {
        let g = grid(7, 4);
        let l = label_mask(&[true; 28], &g, Connectivity::Four).unwrap();
        assert_eq!(l.component_count(), 1);
        let interior = label_mask(&[false; 28], &g, Connectivity::Eight).unwrap();
        assert_eq!(interior.component_count(), 0);
        assert!(label_mask(&[true; 3], &g, Connectivity::Four).is_err());
    }
}
