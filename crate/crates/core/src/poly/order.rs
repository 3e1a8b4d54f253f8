use std::cmp::Ordering;

use super::monomial::{grevlex_slices, Monomial};

/// Monomial orders used by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    /// Blocks of variable indices, earliest block largest; degrevlex inside
    /// each block. Variables missing from every block form an implicit last
    /// block.
    Block(Vec<Vec<usize>>),
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => a.grevlex_cmp(b),
            MonomialOrder::Block(blocks) => {
                let mut seen = vec![false; a.len()];
                for block in blocks {
                    let ea: Vec<u32> = block.iter().map(|&v| a.exp(v)).collect();
                    let eb: Vec<u32> = block.iter().map(|&v| b.exp(v)).collect();
                    for &v in block {
                        seen[v] = true;
                    }
                    match grevlex_slices(&ea, &eb) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                let rest: Vec<usize> = (0..a.len()).filter(|&v| !seen[v]).collect();
                let ea: Vec<u32> = rest.iter().map(|&v| a.exp(v)).collect();
                let eb: Vec<u32> = rest.iter().map(|&v| b.exp(v)).collect();
                grevlex_slices(&ea, &eb)
            }
        }
    }

    /// Blocks as index lists covering `nvars` variables.
    pub fn blocks(&self, nvars: usize) -> Vec<Vec<usize>> {
        match self {
            MonomialOrder::DegRevLex => vec![(0..nvars).collect()],
            MonomialOrder::Block(blocks) => {
                let mut out: Vec<Vec<usize>> = blocks.iter().filter(|b| !b.is_empty()).cloned().collect();
                let rest: Vec<usize> = (0..nvars).filter(|v| !blocks.iter().any(|b| b.contains(v))).collect();
                if !rest.is_empty() {
                    out.push(rest);
                }
                out
            }
        }
    }

    /// Text descriptor such as `block[[x1,x2],[t,z0]]`.
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".to_string(),
            MonomialOrder::Block(_) => {
                let parts: Vec<String> = self
                    .blocks(names.len())
                    .iter()
                    .map(|b| {
                        let n: Vec<&str> = b.iter().map(|&v| names[v].as_str()).collect();
                        format!("[{}]", n.join(","))
                    })
                    .collect();
                format!("block[{}]", parts.join(","))
            }
        }
    }
}
