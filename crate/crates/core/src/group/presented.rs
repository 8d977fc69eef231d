use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::finite::{perm_from_cycles, FiniteGroup, Perm};
use super::word::{Letter, Word};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, AbelianInvariants, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Invalid(format!("relator {i} is the empty word")));
            }
            if let Some(g) = r.max_generator() {
                if g >= generators {
                    return Err(Error::GeneratorOutOfRange { index: g + 1, count: generators });
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn parse(generators: usize, relators: &[&str]) -> Result<Self> {
        let words = relators.iter().map(|r| Word::parse(r)).collect::<Result<Vec<_>>>()?;
        Self::new(generators, words)
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `k x (#relators)` exponent-sum matrix.
    pub fn exponent_matrix(&self) -> Matrix<i64> {
        let cols: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(self.generators)).collect();
        Matrix::from_columns(self.generators, &cols)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        cokernel(&self.exponent_matrix())
    }
}

/// A finite group together with a presentation mapping onto it.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    name: String,
    presentation: Presentation,
    group: FiniteGroup,
    images: Vec<usize>,
}

impl PresentedGroup {
    /// Checks every invariant: relators die, the images generate, and the two
    /// abelianizations agree.
    pub fn verify(presentation: Presentation, perm_gens: &[Perm], degree: usize, caps: &Caps) -> Result<Self> {
        if perm_gens.len() != presentation.generator_count() {
            return Err(Error::Invalid(format!(
                "{} permutation generators for {} presentation generators",
                perm_gens.len(),
                presentation.generator_count()
            )));
        }
        let group = FiniteGroup::enumerate(perm_gens, degree, caps.max_group_order)?;
        let images = group.generators().to_vec();
        let pg = PresentedGroup { name: String::new(), presentation, group, images };
        for (i, r) in pg.presentation.relators().iter().enumerate() {
            if r.len() > caps.max_word_length {
                return Err(Error::cap("relator length", r.len(), caps.max_word_length));
            }
            if pg.evaluate(r)? != 0 {
                return Err(Error::RelatorNotKilled { index: i, relator: r.to_string() });
            }
        }
        let reached = pg.group.subgroup(&pg.images).iter().filter(|&&b| b).count();
        if reached != pg.group.order() {
            return Err(Error::NotGenerating { reached, order: pg.group.order() });
        }
        let from_pres = pg.presentation.abelianization();
        let from_group = pg.group.abelianization();
        if from_pres != from_group {
            return Err(Error::AbelianizationMismatch { presentation: from_pres, group: from_group });
        }
        Ok(pg)
    }

    /// `<x1 | x1^m>` acting on `1..=m` by the long cycle.
    pub fn cyclic(m: usize, caps: &Caps) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("cyclic group of order 0".into()));
        }
        let cycle: Vec<usize> = (1..=m).collect();
        let perm = perm_from_cycles(m, &[cycle])?;
        let pres = Presentation::new(1, vec![Word::power_of(0, m as i64)])?;
        Ok(Self::verify(pres, &[perm], m, caps)?.with_name(format!("c{m}")))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count()
    }

    /// Image of generator `i` in the group.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        let g = self.images[l.gen()];
        if l.is_inverse() {
            self.group.inv(g)
        } else {
            g
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize> {
        let k = self.generator_count();
        let mut acc = self.group.identity();
        for &l in w.letters() {
            if l.gen() >= k {
                return Err(Error::GeneratorOutOfRange { index: l.gen() + 1, count: k });
            }
            acc = self.group.mul(acc, self.letter_image(l));
        }
        Ok(acc)
    }

    /// Minimal-length Schreier transversal and Schreier generators of the
    /// kernel of `F -> G`.
    pub fn schreier(&self) -> SchreierData {
        let n = self.order();
        let k = self.generator_count();
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        transversal[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        let letters = Letter::all(k);
        while let Some(e) = queue.pop_front() {
            for &l in &letters {
                let t = self.group.mul(e, self.letter_image(l));
                if transversal[t].is_none() {
                    transversal[t] = Some(transversal[e].as_ref().unwrap().mul(&Word::letter(l)));
                    queue.push_back(t);
                }
            }
        }
        let transversal: Vec<Word> = transversal.into_iter().map(|w| w.expect("images generate")).collect();
        let mut generators = Vec::new();
        for (e, t) in transversal.iter().enumerate() {
            for i in 0..k {
                let target = self.group.mul(e, self.image(i));
                let s = t.mul(&Word::generator(i)).mul(&transversal[target].inverse());
                if !s.is_empty() {
                    generators.push(s);
                }
            }
        }
        SchreierData { transversal, generators }
    }

    pub fn from_file(path: &Path, caps: &Caps) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
        let file: GroupFile = serde_json::from_str(&text)
            .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
        let name = file
            .name
            .clone()
            .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        Ok(file.build(caps)?.with_name(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierData {
    /// `transversal[g]` is the chosen word for element `g`.
    pub transversal: Vec<Word>,
    /// Nontrivial Schreier generators, in (element, generator) order.
    pub generators: Vec<Word>,
}

/// On-disk group description with 1-based cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<Vec<Vec<usize>>>,
    pub relators: Vec<String>,
}

impl GroupFile {
    pub fn build(&self, caps: &Caps) -> Result<PresentedGroup> {
        let perms = self
            .generators
            .iter()
            .map(|cycles| perm_from_cycles(self.degree, cycles))
            .collect::<Result<Vec<_>>>()?;
        let rels = self.relators.iter().map(|r| Word::parse(r)).collect::<Result<Vec<_>>>()?;
        let pg = PresentedGroup::verify(Presentation::new(perms.len(), rels)?, &perms, self.degree, caps)?;
        Ok(match &self.name {
            Some(n) => pg.with_name(n.clone()),
            None => pg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(degree: usize, gens: Vec<Vec<Vec<usize>>>, rels: &[&str]) -> Result<PresentedGroup> {
        GroupFile { name: None, degree, generators: gens, relators: rels.iter().map(|s| s.to_string()).collect() }
            .build(&Caps::default())
    }

    #[test]
    fn word_evaluation() {
        let c3 = build(3, vec![vec![vec![1, 2, 3]]], &["x1^3"]).unwrap();
        assert_eq!(c3.evaluate(&Word::identity()).unwrap(), 0);
        assert_eq!(c3.evaluate(&Word::parse("x1 x1^-1").unwrap()).unwrap(), 0);
        assert_eq!(c3.evaluate(&Word::power_of(0, 4)).unwrap(), c3.evaluate(&Word::generator(0)).unwrap());
        assert!(c3.evaluate(&Word::generator(1)).is_err());
    }

    #[test]
    fn schreier_counts() {
        let c2 = build(2, vec![vec![vec![1, 2]]], &["x1^2"]).unwrap();
        let s = c2.schreier();
        assert_eq!(s.generators, vec![Word::power_of(0, 2)]);
        let v4 = build(4, vec![vec![vec![1, 2]], vec![vec![3, 4]]], &["x1^2", "x2^2", "x1 x2 x1^-1 x2^-1"]).unwrap();
        assert_eq!(v4.schreier().generators.len(), 5);
        let c3 = build(3, vec![vec![vec![1, 2, 3]]], &["x1^3"]).unwrap();
        assert_eq!(c3.schreier().generators, vec![Word::power_of(0, 3)]);
    }

    #[test]
    fn rejects_bad_presentations() {
        assert!(matches!(build(3, vec![vec![vec![1, 2, 3]]], &["x1^2"]), Err(Error::RelatorNotKilled { index: 0, .. })));
        // <x | x^6> does not present C3 = <(1 2 3)>.
        assert!(matches!(build(3, vec![vec![vec![1, 2, 3]]], &["x1^6"]), Err(Error::AbelianizationMismatch { .. })));
    }

    #[test]
    fn presentation_abelianization() {
        let p = Presentation::parse(1, &["x1^6"]).unwrap();
        assert_eq!(p.abelianization(), AbelianInvariants::cyclic(6));
        let p = Presentation::parse(2, &["x1 x2 x1^-1 x2^-1"]).unwrap();
        assert_eq!(p.abelianization(), AbelianInvariants::free(2));
        let p = Presentation::parse(2, &["x1^2", "x2^2", "x1 x2 x1^-1 x2^-1"]).unwrap();
        assert_eq!(p.abelianization(), AbelianInvariants::from_i64(0, &[2, 2]));
    }
}
