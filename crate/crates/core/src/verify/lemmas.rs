//! Structural properties of indistinguishability on complexes, checked
//! exhaustively over every pattern of a small universe.
//!
//! Patterns are handled as [`PatternSpace`] codes. `S ∼_G T` holds iff the
//! code of `G` is a sub-mask of the code of `(S ∩ T)°`, so each property
//! becomes a handful of bit operations per pattern and pair.

use crate::agents::{AgentPattern, AgentSet, PatternSpace};
use crate::semantics::Frame;
use crate::simplicial::{indist, shared_projection, SimplicialModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaResult {
    pub name: &'static str,
    pub instances: u64,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub results: Vec<LemmaResult>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.violation.is_none())
    }

    pub fn violations(&self) -> impl Iterator<Item = &LemmaResult> {
        self.results.iter().filter(|r| r.violation.is_some())
    }
}

/// Per-universe lookup tables, reusable across complexes.
pub struct LemmaTables {
    space: PatternSpace,
    star: Vec<u32>,
    downset: Vec<u32>,
}

impl LemmaTables {
    /// `None` beyond four agents.
    pub fn new(agents: usize) -> Option<Self> {
        let space = PatternSpace::new(agents)?;
        let size = space.pattern_count() as usize + 1;
        let mut star = vec![0; size];
        let mut downset = vec![0; size];
        for code in space.codes() {
            let g = space.decode(code);
            star[code as usize] = space.encode(&g.star());
            downset[code as usize] = space.downset(code);
        }
        Some(LemmaTables {
            space,
            star,
            downset,
        })
    }
}

struct Tally {
    name: &'static str,
    instances: u64,
    violation: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            instances: 0,
            violation: None,
        }
    }

    /// Counts one instance; records the first failure.
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.violation.is_none() {
            self.violation = Some(detail());
        }
    }

    fn done(self) -> LemmaResult {
        LemmaResult {
            name: self.name,
            instances: self.instances,
            violation: self.violation,
        }
    }
}

/// Runs every property on `m`; `None` if the universe is too large for
/// exhaustive pattern enumeration.
pub fn simplicial_lemmas(m: &SimplicialModel) -> Option<LemmaReport> {
    let tables = LemmaTables::new(m.complex.universe.len())?;
    Some(simplicial_lemmas_with(&tables, m))
}

pub fn simplicial_lemmas_with(t: &LemmaTables, m: &SimplicialModel) -> LemmaReport {
    let space = &t.space;
    let u = &m.complex.universe;
    let s = m.simplices();
    let n = s.len();
    let shared: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| space.encode(&shared_projection(&s[i], &s[j]))).collect())
        .collect();
    let proj: Vec<u32> = s.iter().map(|x| space.encode(&x.projection())).collect();
    let ind = |i: usize, j: usize, g: u32| g & !shared[i][j] == 0;
    let codes: Vec<u32> = space.codes().collect();
    let pat = |g: u32| u.fmt_pattern(&space.decode(g));
    let pair = |i: usize, j: usize| format!("({},{})", s[i].name, s[j].name);
    let mut out = Vec::new();

    // The code-level relation against the face-level definition and the
    // model's relation, on every pattern for up to three agents and a
    // fixed stride of patterns otherwise.
    let mut agree = Tally::new("definition");
    let stride = if space.agents() <= 3 { 1 } else { 97 };
    for &g in codes.iter().step_by(stride) {
        let gp = space.decode(g);
        let rel = m.relation(&gp);
        for i in 0..n {
            for j in 0..n {
                let direct = indist(&s[i], &s[j], &gp);
                agree.check(direct == ind(i, j, g) && direct == rel.related(i, j), || {
                    format!("{} {}", pair(i, j), pat(g))
                });
            }
        }
    }
    out.push(agree.done());

    let mut sym = Tally::new("symmetry");
    for &g in &codes {
        for i in 0..n {
            for j in i + 1..n {
                sym.check(ind(i, j, g) == ind(j, i, g), || format!("{} {}", pair(i, j), pat(g)));
            }
        }
    }
    out.push(sym.done());

    // Relatedness is monotone in the pattern, so for each triple the largest
    // pattern relating both legs decides transitivity for all patterns.
    let mut trans = Tally::new("transitivity");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let both = shared[i][j] & shared[j][k];
                trans.check(both == 0 || ind(i, k, both), || {
                    format!("{}->{} {}", pair(i, j), s[k].name, pat(both))
                });
            }
        }
    }
    out.push(trans.done());

    let mut refl = Tally::new("reflexivity dichotomy");
    for &g in &codes {
        let star = t.star[g as usize];
        for i in 0..n {
            let covered = star & !proj[i] == 0;
            refl.check(ind(i, i, g) == covered, || format!("{} {}", s[i].name, pat(g)));
            if !covered {
                for j in 0..n {
                    refl.check(!ind(i, j, g), || format!("{} {}", pair(i, j), pat(g)));
                }
            }
        }
    }
    out.push(refl.done());

    let mut down = Tally::new("downward closure");
    for i in 0..n {
        for j in 0..n {
            let sh = shared[i][j];
            down.check(sh == 0 || t.downset[sh as usize] == sh, || pair(i, j));
        }
    }
    out.push(down.done());

    let mut redundant = Tally::new("redundant subpattern");
    for &g in &codes {
        let extra = t.downset[g as usize] & !g;
        for b in PatternSpace::sets(extra) {
            let gb = g | PatternSpace::bit(b);
            for i in 0..n {
                for j in 0..n {
                    redundant.check(ind(i, j, gb) == ind(i, j, g), || {
                        format!("{} {} + {}", pair(i, j), pat(g), u.fmt_set(b))
                    });
                }
            }
        }
    }
    out.push(redundant.done());

    let mut std_group = Tally::new("standard group knowledge");
    for &g in &codes {
        let singles: Vec<u32> = PatternSpace::sets(g).map(PatternSpace::bit).collect();
        for i in 0..n {
            for j in 0..n {
                let meet = singles.iter().all(|&b| ind(i, j, b));
                std_group.check(ind(i, j, g) == meet, || format!("{} {}", pair(i, j), pat(g)));
            }
        }
    }
    out.push(std_group.done());

    let mut anti = Tally::new("anti-monotonicity");
    for &h in &codes {
        for b in PatternSpace::sets(h) {
            let g = h & !PatternSpace::bit(b);
            if g == 0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    anti.check(!ind(i, j, h) || ind(i, j, g), || {
                        format!("{} {} within {}", pair(i, j), pat(g), pat(h))
                    });
                }
            }
        }
    }
    out.push(anti.done());

    // Patterns of up to four groups; merging two of them into their union.
    let mut synergy = Tally::new("synergy strengthening");
    for &h in codes.iter().filter(|c| c.count_ones() <= 4) {
        let groups: Vec<AgentSet> = PatternSpace::sets(h).collect();
        for (x, &a) in groups.iter().enumerate() {
            for &b in &groups[x + 1..] {
                let merged = (h & !PatternSpace::bit(a) & !PatternSpace::bit(b)) | PatternSpace::bit(a.union(b));
                for i in 0..n {
                    for j in 0..n {
                        synergy.check(!ind(i, j, merged) || ind(i, j, h), || {
                            format!("{} {} from {}", pair(i, j), pat(h), pat(merged))
                        });
                    }
                }
            }
        }
    }
    out.push(synergy.done());

    let mut dist = Tally::new("distributed knowledge");
    for a in u.full().subsets() {
        let sp = space.encode(&AgentPattern::singletons(a));
        for i in 0..n {
            for j in 0..n {
                let meet = a
                    .agents()
                    .all(|x| ind(i, j, PatternSpace::bit(AgentSet::single(x))));
                dist.check(ind(i, j, sp) == meet, || format!("{} {}", pair(i, j), u.fmt_set(a)));
            }
        }
    }
    out.push(dist.done());

    let mut maxes = Tally::new("max determines simplex");
    for i in 0..n {
        for j in i + 1..n {
            let same_max = s[i].max_face() == s[j].max_face();
            maxes.check(!same_max || s[i].faces == s[j].faces, || pair(i, j));
        }
    }
    out.push(maxes.done());

    LemmaReport { results: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::gen::{gen_complex, GenParams};

    #[test]
    fn generated_complexes_satisfy_everything() {
        for i in 0..10 {
            let m = gen_complex(&GenParams::sample(5, i, 3, 6, 1)).unwrap();
            let r = simplicial_lemmas(&m).unwrap();
            assert!(r.passed(), "{:?}", r.violations().collect::<Vec<_>>());
            assert!(r.results.iter().find(|x| x.name == "definition").unwrap().instances > 0);
        }
    }

    #[test]
    fn broken_complex_is_reported() {
        use crate::simplicial::{Complex, Face, Simplex};
        use crate::agents::Universe;
        // Two simplices sharing their top face but not the faces below it;
        // the complex condition fails, and so does downward closure.
        let u = Universe::letters(2);
        let ab = u.parse_set("ab").unwrap();
        let (a, b) = (u.parse_set("a").unwrap(), u.parse_set("b").unwrap());
        let s = Simplex::new("s", [Face::new(ab, 0), Face::new(a, 0), Face::new(b, 0)]);
        let t = Simplex::new("t", [Face::new(ab, 0), Face::new(a, 1), Face::new(b, 1)]);
        let m = SimplicialModel {
            complex: Complex::new(u, vec![s, t]),
            valuation: vec![Default::default(); 2],
        };
        let r = simplicial_lemmas(&m).unwrap();
        let failed: Vec<&str> = r.violations().map(|x| x.name).collect();
        assert!(failed.contains(&"downward closure"), "{failed:?}");
    }
}
