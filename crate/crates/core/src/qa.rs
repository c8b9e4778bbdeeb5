//! Question-answer pairs over table cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CellType, LayoutTree, QaPair, Table};

pub fn question_for(row_key: &str, column_key: &str) -> String {
    format!("What is the value of {row_key} for {column_key}?")
}

/// One pair per non-empty data cell, with the cell's span in the flattened
/// word list of `layout`.
pub fn generate_qa_pairs(table: &Table, layout: &LayoutTree) -> Result<Vec<QaPair>> {
    let mut pairs = Vec::new();
    let mut cursor = 0usize;
    for row in &table.rows {
        for cell in &row.cells {
            let start = cursor;
            cursor += cell.words.len();
            if cell.cell_type != CellType::Data || cell.is_empty() {
                continue;
            }
            let row_key = row
                .cells
                .first()
                .filter(|c| c.cell_type == CellType::RowHeader && !c.is_empty())
                .map(|c| c.text())
                .ok_or_else(|| Error::Generation(format!("{}: row {} has no row header", table.id, row.row_index)))?;
            let column_key = table
                .column_key(cell.column_index)
                .filter(|k| !k.is_empty())
                .ok_or_else(|| {
                    Error::Generation(format!("{}: column {} has no column header", table.id, cell.column_index))
                })?;
            let pair = QaPair {
                question: question_for(&row_key, &column_key),
                answer_text: cell.text(),
                row_key,
                column_key,
                start,
                end: cursor,
            };
            pairs.push(pair);
        }
    }
    let words: Vec<&str> = layout.words.iter().map(|w| w.text.as_str()).collect();
    if words.len() != cursor {
        return Err(Error::Generation(format!(
            "{}: layout has {} words, table has {cursor}",
            table.id,
            words.len()
        )));
    }
    for p in &pairs {
        p.check_span(&words)?;
    }
    Ok(pairs)
}

/// Uniform, seed-determined choice of the competition pair.
pub fn select_competition_pair(pairs: &[QaPair], seed: u64) -> Result<usize> {
    if pairs.is_empty() {
        return Err(Error::Generation("no question-answer pairs to choose from".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    Ok(rng.gen_range(0..pairs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fonts::FontLibrary;
    use crate::layout::layout_table;
    use crate::model::{Cell, PageMode, Row, Typeface, Typography};
    use crate::sampler::{derive_table_seed, sample_spec, sample_table, GeneratorConfig};
    use crate::theme::builtin_themes;

    fn table(rows: Vec<Vec<Cell>>) -> Table {
        let column_count = rows[0].iter().map(|c| c.colspan).sum();
        Table {
            id: "qa".into(),
            theme: 0,
            column_count,
            currency_symbol: "£".into(),
            typography: Typography {
                typeface: Typeface::Sans,
                font_size_pt: 9.0,
                bold_headers: false,
            },
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(i, cells)| Row {
                    row_index: i,
                    section_index: None,
                    cells,
                })
                .collect(),
        }
    }

    fn lay(t: &Table) -> LayoutTree {
        layout_table(t, &builtin_themes()[0].style, FontLibrary::shared(), PageMode::TableBoundary).unwrap()
    }

    #[test]
    fn answer_after_long_title() {
        // One header word, 36 title words and a 4-word row header put the
        // answer at flattened index 41.
        let filler: Vec<String> = (0..36).map(|i| format!("w{i}")).collect();
        let t = table(vec![
            vec![
                Cell::new(CellType::ColumnHeader, vec![], 0),
                Cell::from_text(CellType::ColumnHeader, "30.11.74", 1),
            ],
            vec![Cell::spanning(CellType::SectionTitle, filler, 0, 2)],
            vec![
                Cell::from_text(CellType::RowHeader, "Idle ver learning satisfied", 0),
                Cell::from_text(CellType::Data, "52,160", 1),
            ],
        ]);
        let pairs = generate_qa_pairs(&t, &lay(&t)).unwrap();
        assert_eq!(pairs.len(), 1);
        let p = &pairs[0];
        assert_eq!(p.question, "What is the value of Idle ver learning satisfied for 30.11.74?");
        assert_eq!(p.answer_text, "52,160");
        assert_eq!(p.row_key, "Idle ver learning satisfied");
        assert_eq!(p.column_key, "30.11.74");
        assert_eq!((p.start, p.end), (41, 42));
    }

    #[test]
    fn no_data_means_no_pairs() {
        let t = table(vec![
            vec![
                Cell::new(CellType::ColumnHeader, vec![], 0),
                Cell::from_text(CellType::ColumnHeader, "2020", 1),
            ],
            vec![Cell::from_text(CellType::RowHeader, "Stock", 0), Cell::new(CellType::Data, vec![], 1)],
        ]);
        assert!(generate_qa_pairs(&t, &lay(&t)).unwrap().is_empty());
    }

    #[test]
    fn missing_header_is_an_error() {
        let t = table(vec![
            vec![Cell::new(CellType::ColumnHeader, vec![], 0), Cell::new(CellType::ColumnHeader, vec![], 1)],
            vec![Cell::from_text(CellType::RowHeader, "Stock", 0), Cell::from_text(CellType::Data, "5", 1)],
        ]);
        assert!(matches!(generate_qa_pairs(&t, &lay(&t)), Err(Error::Generation(_))));
    }

    #[test]
    fn corpus_span_fidelity_and_counts() {
        let config = GeneratorConfig::default();
        for i in 0..200u64 {
            let spec = sample_spec(derive_table_seed(17, i), (i % 6) as usize, &config).unwrap();
            let t = sample_table(&spec, &config).unwrap();
            let l = lay(&t);
            let pairs = generate_qa_pairs(&t, &l).unwrap();
            let non_empty_data = t
                .rows
                .iter()
                .flat_map(|r| &r.cells)
                .filter(|c| c.cell_type == CellType::Data && !c.is_empty())
                .count();
            assert_eq!(pairs.len(), non_empty_data);
            let words: Vec<&str> = l.words.iter().map(|w| w.text.as_str()).collect();
            for p in &pairs {
                assert_eq!(words[p.start..p.end].join(" "), p.answer_text);
                assert_eq!(p.question.matches(&p.row_key).count(), 1, "{}", p.question);
                assert_eq!(p.question.matches(&p.column_key).count(), 1, "{}", p.question);
            }
        }
    }

    #[test]
    fn competition_pair_choice() {
        let pair = QaPair {
            question: "q".into(),
            answer_text: "a".into(),
            row_key: "r".into(),
            column_key: "c".into(),
            start: 0,
            end: 1,
        };
        assert_eq!(select_competition_pair(std::slice::from_ref(&pair), 99).unwrap(), 0);
        assert!(select_competition_pair(&[], 1).is_err());

        let ten = vec![pair; 10];
        assert_eq!(select_competition_pair(&ten, 5).unwrap(), select_competition_pair(&ten, 5).unwrap());
        let mut counts = [0u32; 10];
        for s in 0..100_000u64 {
            counts[select_competition_pair(&ten, derive_table_seed(1, s)).unwrap()] += 1;
        }
        for c in counts {
            let f = f64::from(c) / 100_000.0;
            assert!((f - 0.1).abs() <= 0.01, "frequency {f}");
        }
    }
}
