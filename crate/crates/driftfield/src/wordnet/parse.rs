//! Parsers for the WordNet grind database format (`data.pos` /
//! `index.pos`). License header lines begin with a space and are skipped.

use super::{PartOfSpeech, SynsetSpec, WordnetError};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

fn open(path: &Path) -> Result<BufReader<File>, WordnetError> {
    if !path.exists() {
        return Err(WordnetError::MissingFile(path.to_path_buf()));
    }
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| WordnetError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> WordnetError {
    WordnetError::Parse {
        file: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parses one `data.pos` file into synset records with member words and
/// same-pos hypernym offsets (`@` and `@i` pointers).
pub(super) fn parse_data_file(
    path: &Path,
    pos: PartOfSpeech,
) -> Result<Vec<SynsetSpec>, WordnetError> {
    let reader = open(path)?;
    let mut specs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|source| WordnetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.starts_with(' ') || line.is_empty() {
            continue;
        }
        let body = line.split(" | ").next().unwrap_or(&line);
        let mut fields = body.split_whitespace();
        let mut next = |what: &str| {
            fields
                .next()
                .ok_or_else(|| parse_err(path, lineno, format!("truncated record at {what}")))
        };

        let offset: u32 = next("synset_offset")?
            .parse()
            .map_err(|_| parse_err(path, lineno, "bad synset offset"))?;
        let _lex_filenum = next("lex_filenum")?;
        let ss_type = next("ss_type")?;
        if ss_type != pos.tag().to_string() {
            return Err(parse_err(
                path,
                lineno,
                format!("unexpected synset type '{ss_type}'"),
            ));
        }
        let w_cnt = usize::from_str_radix(next("w_cnt")?, 16)
            .map_err(|_| parse_err(path, lineno, "bad word count"))?;
        let mut lemmas = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            lemmas.push(next("word")?.to_string());
            let _lex_id = next("lex_id")?;
        }
        let p_cnt: usize = next("p_cnt")?
            .parse()
            .map_err(|_| parse_err(path, lineno, "bad pointer count"))?;
        let mut hypernyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = next("pointer_symbol")?;
            let target: u32 = next("pointer_offset")?
                .parse()
                .map_err(|_| parse_err(path, lineno, "bad pointer offset"))?;
            let target_pos = next("pointer_pos")?;
            let _source_target = next("pointer_source_target")?;
            // instance hypernyms count as hypernyms for path purposes
            if (symbol == "@" || symbol == "@i") && target_pos == pos.tag().to_string() {
                hypernyms.push(target);
            }
        }
        specs.push(SynsetSpec {
            pos,
            offset,
            lemmas,
            hypernyms,
        });
    }
    if specs.is_empty() {
        return Err(parse_err(path, 0, "no synsets found"));
    }
    Ok(specs)
}

/// Parses one `index.pos` file into (lowercase lemma, pos, synset
/// offsets) entries.
pub(super) fn parse_index_file(
    path: &Path,
    pos: PartOfSpeech,
) -> Result<Vec<(String, PartOfSpeech, Vec<u32>)>, WordnetError> {
    let reader = open(path)?;
    let mut entries = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|source| WordnetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.starts_with(' ') || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 5 {
            return Err(parse_err(path, lineno, "short index record"));
        }
        let lemma = fields[0].to_string();
        let synset_cnt: usize = fields[2]
            .parse()
            .map_err(|_| parse_err(path, lineno, "bad synset count"))?;
        if synset_cnt == 0 || fields.len() < synset_cnt {
            return Err(parse_err(path, lineno, "synset count out of range"));
        }
        let offsets: Vec<u32> = fields[fields.len() - synset_cnt..]
            .iter()
            .map(|f| {
                f.parse()
                    .map_err(|_| parse_err(path, lineno, "bad index offset"))
            })
            .collect::<Result<_, _>>()?;
        entries.push((lemma, pos, offsets));
    }
    Ok(entries)
}
