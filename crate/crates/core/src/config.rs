//! Search flip-graph balls for labelled arc configurations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ball::{flip_graph_ball, FlipBall};
use crate::error::{Error, Result};
use crate::normal::{intersection_number, NormalArc};
use crate::surface::{build_surface, cut_along, piece_class, PieceClass, SideLabel, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRequirement {
    pub pair: [String; 2],
    pub value: u8,
}

/// Labels that must be the arc sides of one piece of a common triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRequirement {
    pub labels: Vec<String>,
    pub class: PieceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationPattern {
    pub labels: Vec<String>,
    #[serde(default)]
    pub intersections: Vec<IntersectionRequirement>,
    #[serde(default)]
    pub triangles: Vec<TriangleRequirement>,
}

impl ConfigurationPattern {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentPattern(m));
        let mut index = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return bad(format!("label {l} repeated"));
            }
        }
        let known = |l: &String| index.contains_key(l.as_str());
        let mut disjoint = Vec::new();
        for t in &self.triangles {
            if let Some(l) = t.labels.iter().find(|l| !known(l)) {
                return bad(format!("triangle names unknown label {l}"));
            }
            let need = if t.class == PieceClass::Embedded {
                3
            } else {
                2
            };
            let mut distinct = t.labels.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() != t.labels.len() || distinct.len() != need {
                return bad(format!(
                    "a {:?} piece has {need} distinct arc sides, pattern gives {:?}",
                    t.class, t.labels
                ));
            }
            for (i, a) in distinct.iter().enumerate() {
                for b in &distinct[i + 1..] {
                    disjoint.push((a.clone(), b.clone()));
                }
            }
        }
        for r in &self.intersections {
            if let Some(l) = r.pair.iter().find(|l| !known(l)) {
                return bad(format!("intersection names unknown label {l}"));
            }
            if r.value > 1 {
                return bad(format!("intersection value {} is not 0 or 1", r.value));
            }
            if r.pair[0] == r.pair[1] && r.value != 0 {
                return bad(format!("{} meets itself", r.pair[0]));
            }
            let (a, b) = (&r.pair[0], &r.pair[1]);
            let together = disjoint
                .iter()
                .any(|(x, y)| (x == a && y == b) || (x == b && y == a));
            if together && r.value != 0 {
                return bad(format!(
                    "{a} and {b} bound a common piece, so they cannot intersect"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// Label to arc, written as a canonical path.
    pub arcs: BTreeMap<String, String>,
    /// Node of the ball used for the first triangle requirement.
    pub node: usize,
    pub triangulation: Triangulation,
}

/// One piece of one node: its distinct arc sides (in root coordinates).
struct PieceRecord {
    node: usize,
    arcs: Vec<usize>,
    class: PieceClass,
}

fn piece_records(ball: &FlipBall, arcs: &[NormalArc]) -> Result<Vec<PieceRecord>> {
    let index: HashMap<&NormalArc, usize> = arcs.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut out = Vec::new();
    for (n, node) in ball.nodes().iter().enumerate() {
        let t = &node.triangulation;
        let all: Vec<usize> = (0..t.num_arcs()).collect();
        for region in cut_along(t, &all)?.regions {
            let mut sides: Vec<usize> = region
                .boundary_words
                .iter()
                .flatten()
                .filter_map(|s| match s {
                    SideLabel::Arc { arc, .. } => Some(index[&node.arcs[*arc]]),
                    SideLabel::Boundary { .. } => None,
                })
                .collect();
            sides.sort();
            sides.dedup();
            let class = piece_class(t, region.pieces[0]);
            out.push(PieceRecord {
                node: n,
                arcs: sides,
                class,
            });
        }
    }
    Ok(out)
}

/// First assignment of distinct ball arcs to the pattern's labels meeting
/// every requirement, in a fixed search order.
pub fn find_configuration(
    pattern: &ConfigurationPattern,
    genus: u32,
    boundary: u32,
    radius: usize,
    max_nodes: Option<usize>,
) -> Result<Option<Witness>> {
    pattern.check()?;
    let t = build_surface(genus, boundary, false)?;
    let ball = flip_graph_ball(&t, radius, max_nodes)?;
    search(pattern, &ball)
}

pub fn search(pattern: &ConfigurationPattern, ball: &FlipBall) -> Result<Option<Witness>> {
    pattern.check()?;
    let arcs = ball.arcs();
    let records = piece_records(ball, &arcs)?;
    let label_ix: HashMap<&str, usize> = pattern
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut ctx = Search {
        ball,
        arcs: &arcs,
        records: &records,
        triangles: pattern
            .triangles
            .iter()
            .map(|t| {
                (
                    t.labels.iter().map(|l| label_ix[l.as_str()]).collect(),
                    t.class,
                )
            })
            .collect(),
        meets: pattern
            .intersections
            .iter()
            .map(|r| {
                (
                    label_ix[r.pair[0].as_str()],
                    label_ix[r.pair[1].as_str()],
                    r.value as usize,
                )
            })
            .collect(),
        cache: HashMap::new(),
        chosen: vec![usize::MAX; pattern.labels.len()],
    };
    if !ctx.assign(0)? {
        return Ok(None);
    }
    let node = ctx
        .triangles
        .first()
        .and_then(|(ls, class)| ctx.matching_record(ls, *class))
        .map_or(0, |r| r.node);
    Ok(Some(Witness {
        arcs: pattern
            .labels
            .iter()
            .zip(&ctx.chosen)
            .map(|(l, &a)| (l.clone(), arcs[a].path().to_string()))
            .collect(),
        node,
        triangulation: ball.nodes()[node].triangulation.clone(),
    }))
}

struct Search<'a> {
    ball: &'a FlipBall,
    arcs: &'a [NormalArc],
    records: &'a [PieceRecord],
    triangles: Vec<(Vec<usize>, PieceClass)>,
    meets: Vec<(usize, usize, usize)>,
    cache: HashMap<(usize, usize), usize>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn matching_record(&self, labels: &[usize], class: PieceClass) -> Option<&PieceRecord> {
        let mut want: Vec<usize> = labels.iter().map(|&l| self.chosen[l]).collect();
        want.sort();
        self.records
            .iter()
            .find(|r| r.class == class && r.arcs == want)
    }

    fn meet(&mut self, a: usize, b: usize) -> Result<usize> {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let root = self.ball.root();
        let v = intersection_number(root, &self.arcs[a], &self.arcs[b])?;
        self.cache.insert(key, v);
        Ok(v)
    }

    fn consistent(&mut self, upto: usize) -> Result<bool> {
        let assigned = |l: usize| l <= upto;
        for i in 0..self.triangles.len() {
            let (ls, class) = &self.triangles[i];
            if ls.iter().all(|&l| assigned(l)) && self.matching_record(ls, *class).is_none() {
                return Ok(false);
            }
        }
        for i in 0..self.meets.len() {
            let (a, b, v) = self.meets[i];
            if assigned(a)
                && assigned(b)
                && (a == upto || b == upto)
                && self.meet(self.chosen[a], self.chosen[b])? != v
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn assign(&mut self, label: usize) -> Result<bool> {
        if label == self.chosen.len() {
            return Ok(true);
        }
        // a label on a triangle can only be a side of a piece of that class
        let classes: Vec<PieceClass> = self
            .triangles
            .iter()
            .filter(|(ls, _)| ls.contains(&label))
            .map(|(_, c)| *c)
            .collect();
        for a in 0..self.arcs.len() {
            if self.chosen[..label].contains(&a) {
                continue;
            }
            let possible = classes.iter().all(|c| {
                self.records
                    .iter()
                    .any(|r| r.class == *c && r.arcs.contains(&a))
            });
            if !possible {
                continue;
            }
            self.chosen[label] = a;
            if self.consistent(label)? && self.assign(label + 1)? {
                return Ok(true);
            }
        }
        self.chosen[label] = usize::MAX;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(json: &str) -> ConfigurationPattern {
        ConfigurationPattern::from_json(json).unwrap()
    }

    #[test]
    fn intersecting_co_triangle_is_inconsistent() {
        let p = pattern(
            r#"{"labels":["a","b"],
                "intersections":[{"pair":["a","b"],"value":1}],
                "triangles":[{"labels":["a","b"],"class":"twisted_non_embedded"}]}"#,
        );
        assert!(matches!(p.check(), Err(Error::InconsistentPattern(_))));
    }

    #[test]
    fn wrong_side_count_is_inconsistent() {
        let p = pattern(
            r#"{"labels":["a","b"],"triangles":[{"labels":["a","b"],"class":"embedded"}]}"#,
        );
        assert!(p.check().is_err());
    }

    #[test]
    fn crossing_pair_found() {
        let p = pattern(r#"{"labels":["a","b"],"intersections":[{"pair":["a","b"],"value":1}]}"#);
        let w = find_configuration(&p, 2, 2, 1, None).unwrap().unwrap();
        assert_eq!(w.arcs.len(), 2);
        assert_ne!(w.arcs["a"], w.arcs["b"]);
    }
}
