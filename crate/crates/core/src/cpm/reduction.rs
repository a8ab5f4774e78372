//! The 3SAT reduction to all-points curve-pointset matching: instance
//! generation, the assignment-to-curve builder, and gadget helpers.

use super::CpmInstance;
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

/// A literal: positive or negated variable, 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

/// A 3CNF formula.
#[derive(Debug, Clone)]
pub struct SatFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl SatFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<SatFormula> {
        for clause in &clauses {
            for lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(Error::invalid_input("literal variable out of range"));
                }
            }
        }
        if clauses.is_empty() {
            return Err(Error::invalid_input("formula needs at least one clause"));
        }
        Ok(SatFormula { num_vars, clauses })
    }

    /// Parses DIMACS CNF; only 3-literal clauses are accepted.
    pub fn parse_dimacs(text: &str) -> Result<SatFormula> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() < 3 || fields[0] != "cnf" {
                    return Err(Error::parse("malformed DIMACS problem line".to_string()));
                }
                num_vars = Some(
                    fields[1]
                        .parse::<usize>()
                        .map_err(|_| Error::parse("bad variable count in problem line"))?,
                );
                continue;
            }
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(format!("bad literal token `{tok}`")))?;
                if v == 0 {
                    if current.len() != 3 {
                        return Err(Error::parse(format!(
                            "clause has {} literals; only 3-literal clauses are accepted",
                            current.len()
                        )));
                    }
                    clauses.push([current[0], current[1], current[2]]);
                    current.clear();
                } else {
                    current.push(Literal { var: v.unsigned_abs() as usize, negated: v < 0 });
                }
            }
        }
        if !current.is_empty() {
            return Err(Error::parse("trailing literals without clause terminator"));
        }
        let num_vars = num_vars.ok_or_else(|| Error::parse("missing `p cnf` header"))?;
        SatFormula::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let sign = if lit.negated { "-" } else { "" };
                out.push_str(&format!("{sign}{} ", lit.var));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn contains(&self, clause: usize, var: usize, negated: bool) -> bool {
        self.clauses[clause]
            .iter()
            .any(|l| l.var == var && l.negated == negated)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|l| assignment[l.var - 1] != l.negated)
        })
    }
}

/// The gadget geometry shared by the reduction and the curve builder.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub k: usize,
    pub s: Vec<Point>,
    pub g: Vec<Point>,
    pub c: Vec<Point>,
    pub w: Vec<Point>,
    pub z: Vec<Point>,
    pub alpha: Vec<Point>,
    pub beta: Vec<Point>,
    pub u: Point,
    pub v: Point,
    pub eta: Point,
    pub t: Point,
}

impl Gadget {
    pub fn new(k: usize) -> Gadget {
        let mut s = Vec::with_capacity(k);
        let mut g = Vec::with_capacity(k);
        let mut c = Vec::with_capacity(k);
        let mut w = Vec::with_capacity(k);
        let mut z = Vec::with_capacity(k);
        let mut g_next = Point::xy(1.0, 1.0);
        for j in 1..=k {
            let gj = g_next.clone();
            let sj = Point::xy(gj.coords[0] - 2.0, gj.coords[1] - 2.0);
            let oj = sj.lerp(&gj, 0.5);
            let (cj, wj, next) = if j % 2 == 1 {
                (
                    Point::xy(sj.coords[0], gj.coords[1]),
                    Point::xy(oj.coords[0] + 0.25, oj.coords[1] - 0.25),
                    Point::xy(sj.coords[0] + 0.25 + 8.0, sj.coords[1] + 1.75 + 15.0),
                )
            } else {
                (
                    Point::xy(gj.coords[0], sj.coords[1]),
                    Point::xy(oj.coords[0] - 0.25, oj.coords[1] + 0.25),
                    Point::xy(sj.coords[0] + 1.75 + 15.0, sj.coords[1] + 0.25 + 8.0),
                )
            };
            z.push(cj.lerp(&wj, 0.5));
            s.push(sj);
            g.push(gj);
            c.push(cj);
            w.push(wj);
            g_next = next;
        }
        let ok = s[k - 1].lerp(&g[k - 1], 0.5);
        let (eta, v) = if k % 2 == 1 {
            (
                Point::xy(ok.coords[0] + 1.0, ok.coords[1] + 4.0),
                Point::xy(ok.coords[0] + 1.0, ok.coords[1] + 9.0),
            )
        } else {
            (
                Point::xy(ok.coords[0] + 4.0, ok.coords[1] + 1.0),
                Point::xy(ok.coords[0] + 9.0, ok.coords[1] + 1.0),
            )
        };
        let u = Point::xy(-9.0, -1.0);
        let t = Point::xy(v.coords[0], u.coords[1] - 20.0);
        Gadget { k, s, g, c, w, z, alpha: Vec::new(), beta: Vec::new(), u, v, eta, t }
        .with_connectors()
    }

    fn with_connectors(mut self) -> Gadget {
        for j in 0..self.k.saturating_sub(1) {
            let a = Point {
                coords: self.g[j]
                    .coords
                    .iter()
                    .zip(&self.g[j + 1].coords)
                    .map(|(x, y)| 0.8 * x + 0.2 * y)
                    .collect(),
            };
            let b = Point {
                coords: self.s[j]
                    .coords
                    .iter()
                    .zip(&self.s[j + 1].coords)
                    .map(|(x, y)| 0.2 * x + 0.8 * y)
                    .collect(),
            };
            self.alpha.push(a);
            self.beta.push(b);
        }
        self
    }

    /// The anchor a_j of the A-path: s_j for odd j, g_j for even j (1-based).
    pub fn a_anchor(&self, j: usize) -> &Point {
        if j % 2 == 1 {
            &self.s[j - 1]
        } else {
            &self.g[j - 1]
        }
    }

    /// The anchor b_j of the B-path: g_j for odd j, s_j for even j.
    pub fn b_anchor(&self, j: usize) -> &Point {
        if j % 2 == 1 {
            &self.g[j - 1]
        } else {
            &self.s[j - 1]
        }
    }

    /// The pointset S of the reduced instance: the clause triples plus
    /// u, v, t.
    pub fn pointset(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(3 * self.k + 3);
        for j in 0..self.k {
            out.push(self.s[j].clone());
            out.push(self.g[j].clone());
            out.push(self.c[j].clone());
        }
        out.push(self.u.clone());
        out.push(self.v.clone());
        out.push(self.t.clone());
        out
    }

    /// The gadget subcurve for one variable-occurrence pattern:
    /// `occ[j]` = Some(false) when x appears positively in clause j+1,
    /// Some(true) when negated, None when absent.
    pub fn variable_curve(&self, occ: &[Option<bool>]) -> Vec<Point> {
        let mut ell = vec![self.u.clone(), Point::xy(-4.0, -1.0)];
        for j in 1..=self.k {
            let odd = j % 2 == 1;
            let (sj, gj, cj, wj) = (&self.s[j - 1], &self.g[j - 1], &self.c[j - 1], &self.w[j - 1]);
            match occ[j - 1] {
                Some(false) if odd => {
                    ell.push(sj.lerp(cj, 0.5));
                    ell.push(cj.clone());
                    ell.push(wj.clone());
                }
                Some(true) if !odd => {
                    ell.push(sj.lerp(cj, 0.5));
                    ell.push(cj.clone());
                    ell.push(wj.clone());
                }
                Some(true) if odd => {
                    ell.push(wj.clone());
                    ell.push(cj.clone());
                    ell.push(gj.lerp(cj, 0.5));
                }
                Some(false) => {
                    ell.push(wj.clone());
                    ell.push(cj.clone());
                    ell.push(gj.lerp(cj, 0.5));
                }
                None => {
                    ell.push(wj.clone());
                    ell.push(cj.clone());
                    ell.push(wj.clone());
                }
                _ => unreachable!(),
            }
            if j != self.k {
                ell.push(self.alpha[j - 1].clone());
                ell.push(self.beta[j - 1].clone());
            }
        }
        ell.push(self.eta.clone());
        ell.push(self.v.clone());
        ell
    }

    /// The A-path `<u a_1 ... a_k v>` (truth value 1).
    pub fn a_path(&self) -> Polyline {
        let mut verts = vec![self.u.clone()];
        for j in 1..=self.k {
            verts.push(self.a_anchor(j).clone());
        }
        verts.push(self.v.clone());
        Polyline::new(verts).unwrap()
    }

    /// The B-path `<u b_1 ... b_k v>` (truth value 0).
    pub fn b_path(&self) -> Polyline {
        let mut verts = vec![self.u.clone()];
        for j in 1..=self.k {
            verts.push(self.b_anchor(j).clone());
        }
        verts.push(self.v.clone());
        Polyline::new(verts).unwrap()
    }
}

/// Reduces a 3CNF formula to an all-points curve-pointset matching instance
/// with eps = 1.
pub fn reduce_3sat(phi: &SatFormula) -> Result<(CpmInstance, Gadget)> {
    let k = phi.clauses.len();
    let gadget = Gadget::new(k);
    let mut curve_pts = vec![gadget.t.clone()];
    for i in 1..=phi.num_vars + 2 {
        let occ: Vec<Option<bool>> = (0..k)
            .map(|j| {
                if i <= phi.num_vars {
                    if phi.contains(j, i, false) {
                        Some(false)
                    } else if phi.contains(j, i, true) {
                        Some(true)
                    } else {
                        None
                    }
                } else {
                    None
                }
            })
            .collect();
        curve_pts.extend(gadget.variable_curve(&occ));
        curve_pts.push(gadget.t.clone());
    }
    let curve = Polyline::new(curve_pts)?;
    let instance = CpmInstance::new(gadget.pointset(), curve, 1.0)?;
    Ok((instance, gadget))
}

/// Builds the canonical feasible curve for a truth assignment: per variable
/// the A- or B-path with c_j detours at satisfied occurrences, plus the two
/// extra sweep passes.
pub fn build_assignment_curve(phi: &SatFormula, assignment: &[bool]) -> Result<Polyline> {
    if assignment.len() != phi.num_vars {
        return Err(Error::invalid_input("assignment must cover every variable"));
    }
    let k = phi.clauses.len();
    let gadget = Gadget::new(k);
    let mut q = vec![gadget.t.clone()];
    for (i, &value) in assignment.iter().enumerate() {
        let var = i + 1;
        q.push(gadget.u.clone());
        for j in 1..=k {
            let anchor = if value { gadget.a_anchor(j) } else { gadget.b_anchor(j) };
            q.push(anchor.clone());
            if phi.contains(j - 1, var, !value) {
                q.push(gadget.c[j - 1].clone());
                q.push(anchor.clone());
            }
        }
        q.push(gadget.v.clone());
        q.push(gadget.t.clone());
    }
    for path in [gadget.a_path(), gadget.b_path()] {
        q.extend(path.vertices().iter().cloned());
        q.push(gadget.t.clone());
    }
    Ok(Polyline::new(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::decide_frechet;
    use crate::cpm::verify_feasible;

    fn lit(v: i64) -> Literal {
        Literal { var: v.unsigned_abs() as usize, negated: v < 0 }
    }

    fn formula4() -> SatFormula {
        // (x1 | x2 | x3) & (~x1 | x2 | ~x3) & (x1 | ~x2 | x3) & (~x1 | ~x2 | x3)
        SatFormula::new(
            3,
            vec![
                [lit(1), lit(2), lit(3)],
                [lit(-1), lit(2), lit(-3)],
                [lit(1), lit(-2), lit(3)],
                [lit(-1), lit(-2), lit(3)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn gadget_coordinates_match_construction() {
        let g = Gadget::new(4);
        assert_eq!(g.g[0], Point::xy(1.0, 1.0));
        assert_eq!(g.s[0], Point::xy(-1.0, -1.0));
        assert_eq!(g.c[0], Point::xy(-1.0, 1.0));
        assert_eq!(g.u, Point::xy(-9.0, -1.0));
        assert_eq!(g.pointset().len(), 15);
        // Corner-to-corner gadget invariants.
        for j in 0..4 {
            assert!((g.c[j].dist(&g.s[j]) - 2.0).abs() < 1e-12 || (g.c[j].dist(&g.g[j]) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn v_placement_follows_parity() {
        let g3 = Gadget::new(3);
        let g4 = Gadget::new(4);
        // Odd k: v straight above o_k; even k: to its right.
        let o3 = g3.s[2].lerp(&g3.g[2], 0.5);
        assert_eq!(g3.v, Point::xy(o3.coords[0] + 1.0, o3.coords[1] + 9.0));
        let o4 = g4.s[3].lerp(&g4.g[3], 0.5);
        assert_eq!(g4.v, Point::xy(o4.coords[0] + 9.0, o4.coords[1] + 1.0));
    }

    #[test]
    fn dimacs_roundtrip_and_rejection() {
        let phi = formula4();
        let text = phi.to_dimacs();
        let parsed = SatFormula::parse_dimacs(&text).unwrap();
        assert_eq!(parsed.clauses.len(), 4);
        assert!(SatFormula::parse_dimacs("p cnf 2 1\n1 -2 0\n").is_err());
    }

    #[test]
    fn paths_match_every_gadget_configuration() {
        let k = 4;
        let g = Gadget::new(k);
        let a = g.a_path();
        let b = g.b_path();
        // All 81 occurrence configurations.
        for mask in 0..81u32 {
            let mut occ = Vec::new();
            let mut m = mask;
            for _ in 0..k {
                occ.push(match m % 3 {
                    0 => None,
                    1 => Some(false),
                    _ => Some(true),
                });
                m /= 3;
            }
            let ell = Polyline::new(g.variable_curve(&occ)).unwrap();
            assert!(decide_frechet(&ell, &a, 1.0), "A-path fails occ {occ:?}");
            assert!(decide_frechet(&ell, &b, 1.0), "B-path fails occ {occ:?}");
        }
    }

    #[test]
    fn satisfying_assignment_builds_feasible_curve() {
        let phi = formula4();
        let (instance, _) = reduce_3sat(&phi).unwrap();
        // x = (1, 1, 1) satisfies all four clauses.
        let assignment = vec![true, true, true];
        assert!(phi.satisfied_by(&assignment));
        let q = build_assignment_curve(&phi, &assignment).unwrap();
        assert!(verify_feasible(&instance, &q, true));
    }

    #[test]
    fn unsatisfying_assignment_misses_a_clause_point() {
        let phi = SatFormula::new(
            2,
            vec![
                [lit(1), lit(1), lit(2)],
                [lit(-1), lit(-1), lit(-2)],
                [lit(1), lit(1), lit(1)],
                [lit(-2), lit(-2), lit(-2)],
            ],
        )
        .unwrap();
        let (instance, _) = reduce_3sat(&phi).unwrap();
        // x = (0, 1): clause 3 (x1) unsatisfied.
        let assignment = vec![false, true];
        assert!(!phi.satisfied_by(&assignment));
        let q = build_assignment_curve(&phi, &assignment).unwrap();
        assert!(!verify_feasible(&instance, &q, true));
        // Membership-only check still passes: the curve stays close.
        assert!(verify_feasible(&instance, &q, false));
    }
}
