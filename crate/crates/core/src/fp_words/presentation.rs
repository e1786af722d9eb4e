//! Presentation files.
//!
//! ```text
//! # (Z/2 * Z/3) / <<(ab)^7>>
//! factors = A B
//! A.kind = cyclic
//! A.order = 2
//! A.generator = a
//! B.kind = cyclic
//! B.order = 3
//! B.generator = b
//! relator = (A.a B.b)^7
//! ```
//!
//! Factor kinds: `cyclic` (`order`, `generator`), `finite` (`elements`, first
//! entry is the identity, and `table` with rows separated by `;`), and `free`
//! (`generators`). `F.generating_set` optionally lists factor-local words such
//! as `b^2` or `b1*b2`; inverses are added. `augment = true` adds every
//! relator syllable to the generating sets.

use crate::error::Result;
use crate::kv::{parse_error, KvFile};

use super::{Elem, Factor, FreeProduct, NormalForm};

#[derive(Clone, Debug)]
pub struct Presentation {
    pub ctx: FreeProduct,
    pub relators: Vec<NormalForm>,
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let kv = KvFile::parse(text)?;
    let names: Vec<String> = match kv.get("factors")? {
        Some((line, v)) => {
            let names: Vec<String> = v.split_whitespace().map(String::from).collect();
            if names.len() != 2 {
                return Err(parse_error(line, "`factors` must name exactly two factors"));
            }
            names
        }
        None => {
            let mut names: Vec<String> = kv
                .keys()
                .filter_map(|k| k.strip_suffix(".kind"))
                .map(String::from)
                .collect();
            names.sort();
            if names.len() != 2 {
                return Err(parse_error(0, "expected exactly two `<factor>.kind` keys"));
            }
            names
        }
    };
    let a = parse_factor(&kv, &names[0])?;
    let b = parse_factor(&kv, &names[1])?;
    let mut ctx = FreeProduct::new(a, b)?;
    let mut relators = Vec::new();
    for (line, text) in kv.all("relator") {
        let w = ctx
            .parse_word(text)
            .map_err(|e| parse_error(*line, e.to_string()))?;
        relators.push(w);
    }
    if let Some((line, v)) = kv.get("augment")? {
        match v {
            "true" => ctx = ctx.with_augmented_generators(&relators)?,
            "false" => {}
            _ => return Err(parse_error(line, "`augment` must be true or false")),
        }
    }
    Ok(Presentation { ctx, relators })
}

fn parse_factor(kv: &KvFile, name: &str) -> Result<Factor> {
    let key = |k: &str| format!("{name}.{k}");
    let (line, kind) = kv.require(&key("kind"))?;
    let wrap = |line: usize| move |e: crate::error::Error| parse_error(line, e.to_string());
    let factor = match kind {
        "cyclic" => {
            let (ol, order) = kv.require(&key("order"))?;
            let order: u32 = order
                .parse()
                .map_err(|_| parse_error(ol, "order must be a positive integer"))?;
            let (gl, gen) = kv.require(&key("generator"))?;
            Factor::cyclic(name, gen, order).map_err(wrap(gl))?
        }
        "free" => {
            let (gl, gens) = kv.require(&key("generators"))?;
            Factor::free(name, gens.split_whitespace().map(String::from).collect())
                .map_err(wrap(gl))?
        }
        "finite" => {
            let (el, elems) = kv.require(&key("elements"))?;
            let elems: Vec<String> = elems.split_whitespace().map(String::from).collect();
            let (tl, table) = kv.require(&key("table"))?;
            let index = |s: &str| {
                elems
                    .iter()
                    .position(|e| e == s)
                    .map(|i| i as u32)
                    .ok_or_else(|| parse_error(tl, format!("unknown element `{s}` in table")))
            };
            let rows = table
                .split(';')
                .map(|row| row.split_whitespace().map(index).collect::<Result<Vec<u32>>>())
                .collect::<Result<Vec<_>>>()?;
            let all: Vec<u32> = (0..elems.len() as u32).collect();
            Factor::finite(name, elems, rows, &all).map_err(wrap(el))?
        }
        other => {
            return Err(parse_error(
                line,
                format!("unknown factor kind `{other}` (expected cyclic, finite or free)"),
            ))
        }
    };
    match kv.get(&key("generating_set"))? {
        Some((gl, set)) => {
            let elems = set
                .split_whitespace()
                .map(|w| factor.parse_local(w))
                .collect::<Result<Vec<Elem>>>()
                .map_err(wrap(gl))?;
            factor.with_generating_set(&elems).map_err(wrap(gl))
        }
        // tables default to every element as a generator
        None => Ok(factor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB7: &str = "factors = A B\nA.kind = cyclic\nA.order = 2\nA.generator = a\n\
B.kind = cyclic\nB.order = 3\nB.generator = b\nrelator = (A.a B.b)^7\n";

    #[test]
    fn parses_cyclic_presentation() {
        let p = parse_presentation(AB7).unwrap();
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].len(), 14);
    }

    #[test]
    fn key_order_is_irrelevant() {
        let shuffled: String = AB7.lines().rev().map(|l| format!("{l}\n")).collect();
        let p = parse_presentation(&shuffled).unwrap();
        assert_eq!(p.relators[0].len(), 14);
    }

    #[test]
    fn finite_table_and_generating_set() {
        let text = "A.kind = finite\nA.elements = e s\nA.table = e s ; s e\n\
B.kind = free\nB.generators = x\nB.generating_set = x x^2\nrelator = A.s B.x\n";
        let p = parse_presentation(text).unwrap();
        let x5 = p.ctx.parse_word("B.x^5").unwrap();
        assert_eq!(p.ctx.generator_length(&x5), 3);
    }

    #[test]
    fn diagnostics_carry_lines() {
        let text = "A.kind = cyclic\nA.order = 2\nA.generator = a\nB.kind = cyclic\nB.order = 3\n\
B.generator = b\nrelator = A.a B.c\n";
        match parse_presentation(text) {
            Err(crate::error::Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        let bad_table = "A.kind = finite\nA.elements = e s\nA.table = e s ; e e\nB.kind = free\nB.generators = x\n";
        assert!(parse_presentation(bad_table).is_err());
    }
}
