//! Planar bar-and-joint frameworks and their line arrangements.

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, LinearForm};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rational, SubspaceBasis};
use crate::persp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (k, &(i, j)) in edges.iter().enumerate() {
            if i >= vertex_count || j >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} = ({i}, {j}) references a missing vertex"
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("edge {k} is a loop at {i}")));
            }
            let key = (i.min(j), i.max(j));
            if edges[..k].iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                return Err(Error::InvalidGraph(format!("edge {k} = ({i}, {j}) is repeated")));
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    /// Indices of the edges at `v`, in edge order.
    pub fn star(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| i == v || j == v)
            .map(|(k, _)| k)
            .collect()
    }
}

pub type Point = (Rational, Rational);

/// A graph with a rational placement of its vertices in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FrameworkJson", into = "FrameworkJson")]
pub struct Framework {
    graph: Graph,
    placement: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct FrameworkJson {
    vertices: Vec<[Rational; 2]>,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<FrameworkJson> for Framework {
    type Error = Error;
    fn try_from(j: FrameworkJson) -> Result<Self> {
        let graph = Graph::new(
            j.vertices.len(),
            j.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        )?;
        Framework::new(
            graph,
            j.vertices.into_iter().map(|[x, y]| (x, y)).collect(),
        )
    }
}

impl From<Framework> for FrameworkJson {
    fn from(f: Framework) -> Self {
        FrameworkJson {
            vertices: f.placement.into_iter().map(|(x, y)| [x, y]).collect(),
            edges: f.graph.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Infinitesimal motions split into trivial and nontrivial parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionSpace {
    pub basis: SubspaceBasis,
    pub dim_trivial: usize,
    pub dim_nontrivial: usize,
}

/// A placement obtained by rotating velocities; edges may have collapsed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Redrawing {
    pub placement: Vec<Point>,
    /// Edges whose endpoints coincide in the new placement.
    pub degenerate_edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub motion_nontrivial: usize,
    pub wprep_nontrivial: usize,
    pub agree: bool,
}

pub fn point(x: i64, y: i64) -> Point {
    (Rational::from_int(x), Rational::from_int(y))
}

impl Framework {
    pub fn new(graph: Graph, placement: Vec<Point>) -> Result<Self> {
        if placement.len() != graph.vertex_count {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count,
                found: placement.len(),
            });
        }
        for (k, &(i, j)) in graph.edges.iter().enumerate() {
            if placement[i] == placement[j] {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} joins vertices {i} and {j} placed at the same point"
                )));
            }
        }
        Ok(Framework { graph, placement })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn placement(&self) -> &[Point] {
        &self.placement
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }
}

/// One row per edge `ij`: `p_i - p_j` in the columns of `i`, `p_j - p_i`
/// in the columns of `j`.
pub fn rigidity_matrix(f: &Framework) -> Matrix {
    let v = f.vertex_count();
    let mut m = Matrix::zeros(f.edge_count(), 2 * v);
    for (row, &(i, j)) in f.graph.edges.iter().enumerate() {
        let (pi, pj) = (&f.placement[i], &f.placement[j]);
        let dx = &pi.0 - &pj.0;
        let dy = &pi.1 - &pj.1;
        m[(row, 2 * j)] = -&dx;
        m[(row, 2 * j + 1)] = -&dy;
        m[(row, 2 * i)] = dx;
        m[(row, 2 * i + 1)] = dy;
    }
    m
}

/// Two translations and the rotation `v_i = (-y_i, x_i)`.
pub fn trivial_motions(f: &Framework) -> Vec<Vec<Rational>> {
    let v = f.vertex_count();
    let mut tx = vec![Rational::zero(); 2 * v];
    let mut ty = vec![Rational::zero(); 2 * v];
    let mut rot = vec![Rational::zero(); 2 * v];
    for (i, (x, y)) in f.placement.iter().enumerate() {
        tx[2 * i] = Rational::one();
        ty[2 * i + 1] = Rational::one();
        rot[2 * i] = -y;
        rot[2 * i + 1] = x.clone();
    }
    vec![tx, ty, rot]
}

pub fn motion_space(f: &Framework) -> MotionSpace {
    let basis = rigidity_matrix(f).kernel_basis();
    let distinct = f.placement.iter().any(|p| *p != f.placement[0]);
    let dim_trivial = if distinct { 3 } else { 2 };
    let dim_trivial = dim_trivial.min(2 * f.vertex_count());
    MotionSpace {
        dim_nontrivial: basis.dim() - dim_trivial,
        dim_trivial,
        basis,
    }
}

/// The line through `(a, b)` and `(c, d)` as the form
/// `(b - d) x + (c - a) y + (ad - bc) z`.
pub fn line_through(p: &Point, q: &Point) -> Result<LinearForm> {
    let (a, b) = p;
    let (c, d) = q;
    LinearForm::new(vec![b - d, c - a, &(a * d) - &(b * c)])
}

/// The lines along the bars, in edge order.
pub fn arrangement_of(f: &Framework) -> Result<Arrangement> {
    let mut forms: Vec<LinearForm> = Vec::with_capacity(f.edge_count());
    for (k, &(i, j)) in f.graph.edges.iter().enumerate() {
        let line = line_through(&f.placement[i], &f.placement[j])?;
        if let Some(first) = forms.iter().position(|g| *g == line) {
            return Err(Error::CoincidentLines { first, second: k });
        }
        forms.push(line);
    }
    Arrangement::from_forms(3, forms)
}

/// Whether the only concurrences among the bars are the vertex stars of
/// degree at least three, in an essential arrangement.
pub fn has_generic_matroid(f: &Framework) -> Result<bool> {
    let a = arrangement_of(f)?;
    if !a.is_essential() {
        return Ok(false);
    }
    let mut stars: Vec<Vec<usize>> = (0..f.vertex_count())
        .filter(|&v| f.graph.degree(v) >= 3)
        .map(|v| f.graph.star(v))
        .collect();
    stars.sort();
    let mut multiple: Vec<Vec<usize>> = a
        .flats_of_rank(2)
        .into_iter()
        .filter(|x| x.size() >= 3)
        .map(|x| x.indices)
        .collect();
    multiple.sort();
    Ok(stars == multiple)
}

/// Moves each vertex by its velocity rotated a quarter turn clockwise.
pub fn engineers_trick(f: &Framework, motion: &[Rational]) -> Result<Redrawing> {
    let r = rigidity_matrix(f);
    if !r.mul_vec(motion)?.iter().all(Rational::is_zero) {
        return Err(Error::Precondition("vector is not an infinitesimal motion".into()));
    }
    let placement: Vec<Point> = f
        .placement
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let (a, b) = (&motion[2 * i], &motion[2 * i + 1]);
            (x + b, y - a)
        })
        .collect();
    let degenerate_edges = f
        .graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| placement[i] == placement[j])
        .map(|(k, _)| k)
        .collect();
    Ok(Redrawing {
        placement,
        degenerate_edges,
    })
}

/// Whether every edge of `f` is parallel to the same edge under `placement`.
pub fn is_parallel_redrawing(f: &Framework, placement: &[Point]) -> bool {
    f.graph.edges.iter().all(|&(i, j)| {
        let (p, q) = (&f.placement[i], &f.placement[j]);
        let (s, t) = (&placement[i], &placement[j]);
        let u = (&p.0 - &q.0, &p.1 - &q.1);
        let w = (&s.0 - &t.0, &s.1 - &t.1);
        (&u.0 * &w.1 - &u.1 * &w.0).is_zero()
    })
}

pub fn correspondence_check(f: &Framework) -> Result<CorrespondenceReport> {
    if !has_generic_matroid(f)? {
        return Err(Error::Precondition(
            "framework arrangement does not have the generic matroid".into(),
        ));
    }
    let motion_nontrivial = motion_space(f).dim_nontrivial;
    let wprep_nontrivial = persp::wprep_report(&arrangement_of(f)?, 3)?.dim_nontrivial;
    Ok(CorrespondenceReport {
        motion_nontrivial,
        wprep_nontrivial,
        agree: motion_nontrivial == wprep_nontrivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Framework {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        Framework::new(g, vec![point(0, 0), point(3, 1), point(1, 4)]).unwrap()
    }

    fn dixon() -> Framework {
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                edges.push((i, j));
            }
        }
        let g = Graph::new(6, edges).unwrap();
        let p = vec![
            point(1, 0),
            point(2, 0),
            point(5, 0),
            point(0, 1),
            point(0, 3),
            point(0, 9),
        ];
        Framework::new(g, p).unwrap()
    }

    #[test]
    fn single_edge_row() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let f = Framework::new(g, vec![point(0, 0), point(1, 0)]).unwrap();
        let r = rigidity_matrix(&f);
        assert_eq!(r, Matrix::from_i64_rows(&[&[-1, 0, 1, 0]]));
        assert_eq!(motion_space(&f).basis.dim(), 3);
        let a = arrangement_of(&f).unwrap();
        assert_eq!(a.form(0), &LinearForm::from_ints(&[0, 1, 0]).unwrap());
    }

    #[test]
    fn triangle_is_rigid() {
        let f = triangle();
        assert_eq!(rigidity_matrix(&f).rank(), 3);
        let m = motion_space(&f);
        assert_eq!((m.basis.dim(), m.dim_nontrivial), (3, 0));
        assert!(has_generic_matroid(&f).unwrap());
        let a = arrangement_of(&f).unwrap();
        assert!(a.flats_of_rank(2).iter().all(|x| x.size() == 2));
    }

    #[test]
    fn dixon_flexes() {
        let f = dixon();
        let m = motion_space(&f);
        assert_eq!((m.basis.dim(), m.dim_nontrivial), (4, 1));
        assert!(has_generic_matroid(&f).unwrap());
        let a = arrangement_of(&f).unwrap();
        let triples = a.flats_of_rank(2).iter().filter(|x| x.size() == 3).count();
        assert_eq!(triples, 6);
        let c = correspondence_check(&f).unwrap();
        assert_eq!((c.motion_nontrivial, c.wprep_nontrivial, c.agree), (1, 1, true));
    }

    #[test]
    fn trivial_motions_in_kernel() {
        for f in [triangle(), dixon()] {
            let m = motion_space(&f);
            for t in trivial_motions(&f) {
                assert!(m.basis.contains(&t).unwrap());
            }
        }
    }

    #[test]
    fn engineers_trick_gives_parallel_redrawings() {
        let f = dixon();
        for v in motion_space(&f).basis.vectors() {
            let r = engineers_trick(&f, &v).unwrap();
            assert!(is_parallel_redrawing(&f, &r.placement));
        }
        let zero = vec![Rational::zero(); 12];
        assert_eq!(engineers_trick(&f, &zero).unwrap().placement, f.placement);
        let mut bad = zero;
        bad[0] = Rational::one();
        bad[7] = Rational::one();
        assert!(engineers_trick(&f, &bad).is_err());
    }

    #[test]
    fn translation_redraws_as_translation() {
        let f = triangle();
        let t = &trivial_motions(&f)[0];
        let r = engineers_trick(&f, t).unwrap();
        let expected: Vec<Point> = f
            .placement()
            .iter()
            .map(|(x, y)| (x.clone(), y - &Rational::one()))
            .collect();
        assert_eq!(r.placement, expected);
    }

    #[test]
    fn invalid_graphs_rejected() {
        assert!(Graph::new(2, vec![(0, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let collinear = Framework::new(g, vec![point(0, 0), point(1, 0), point(2, 0)]).unwrap();
        assert_eq!(
            arrangement_of(&collinear),
            Err(Error::CoincidentLines { first: 0, second: 1 })
        );
    }

    #[test]
    fn json_round_trip() {
        let f = dixon();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"vertices":[["1","0"]"#));
        let g: Framework = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
