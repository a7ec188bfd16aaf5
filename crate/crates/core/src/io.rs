//! Text formats: plain matrix files, lattice basis files, the alist
//! format for parity-check matrices, and field spec strings.
//!
//! Matrix files: first line `rows cols q`, then one whitespace-separated
//! row per line with entries in [0, q); extension-field entries are the
//! integer encodings of polynomial-basis bit patterns. Basis files use
//! the same layout with q = 0 and arbitrary signed integers.
//!
//! Alist files describe a parity-check matrix: `n m` (columns, rows),
//! then max column/row degrees, the per-column and per-row degree lists,
//! then n column-index lists and m row-index lists, 1-based and
//! optionally zero-padded. Nonbinary alists carry a lone `q` line after
//! `n m`, and every entry is an `index value` pair.

use num_bigint::BigInt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::lattice::LatticeBasis;
use crate::matrix::Matrix;

/// Parses "2", "3", "2^6" (default modulus) or "2^6:0x43".
pub fn parse_field_spec(s: &str) -> Result<Field> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::BadFieldSpec(s.into()));
    }
    if let Some(rest) = s.strip_prefix("2^") {
        let (deg, modulus) = match rest.split_once(':') {
            Some((deg, modhex)) => {
                let modhex = modhex
                    .strip_prefix("0x")
                    .or_else(|| modhex.strip_prefix("0X"))
                    .ok_or_else(|| Error::BadFieldSpec(s.into()))?;
                let m = u64::from_str_radix(modhex, 16)
                    .map_err(|_| Error::BadFieldSpec(s.into()))?;
                (deg, Some(m))
            }
            None => (rest, None),
        };
        let m: u32 = deg.parse().map_err(|_| Error::BadFieldSpec(s.into()))?;
        return Field::extension(m, modulus);
    }
    let q: u64 = s.parse().map_err(|_| Error::BadFieldSpec(s.into()))?;
    Field::prime(q)
}

/// The field implied by a matrix-file header cardinality: primes map to
/// prime fields and powers of two to the default-modulus extension.
pub fn field_for_order(q: u64) -> Result<Field> {
    if q.is_power_of_two() && q > 2 {
        Field::extension(q.trailing_zeros(), None)
    } else {
        Field::prime(q)
    }
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { iter: text.lines().enumerate() }
    }

    /// Next non-blank, non-comment line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.iter.by_ref() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((idx + 1, trimmed));
        }
        None
    }
}

fn split_numbers<T: FromStr>(line: &str, lineno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| Error::parse(lineno, format!("bad integer {:?}", tok)))
        })
        .collect()
}

/// Header of a matrix or basis file: (rows, cols, q).
pub fn matrix_header(text: &str) -> Result<(usize, usize, u64)> {
    let mut lines = Lines::new(text);
    let (lineno, header) =
        lines.next_content().ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let nums: Vec<u64> = split_numbers(header, lineno)?;
    if nums.len() != 3 {
        return Err(Error::parse(lineno, format!("expected header `rows cols q`, got {:?}", header)));
    }
    Ok((nums[0] as usize, nums[1] as usize, nums[2]))
}

/// Parses a generator/parity matrix over `field`, validating the header
/// cardinality and every entry.
pub fn parse_matrix(text: &str, field: Field) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    let (lineno, header) =
        lines.next_content().ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let nums: Vec<u64> = split_numbers(header, lineno)?;
    if nums.len() != 3 {
        return Err(Error::parse(lineno, format!("expected header `rows cols q`, got {:?}", header)));
    }
    let (rows, cols, q) = (nums[0] as usize, nums[1] as usize, nums[2]);
    if q != field.q() {
        return Err(Error::parse(
            lineno,
            format!("file is over GF({}) but the field spec says GF({})", q, field.q()),
        ));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::parse(lineno, "matrix dimensions must be positive".to_string()));
    }
    let mut data = Vec::with_capacity(rows);
    for r in 0..rows {
        let (lineno, line) = lines
            .next_content()
            .ok_or_else(|| Error::parse(0, format!("missing row {} of {}", r + 1, rows)))?;
        let row: Vec<u64> = split_numbers(line, lineno)?;
        if row.len() != cols {
            return Err(Error::parse(
                lineno,
                format!("expected {} entries, found {}", cols, row.len()),
            ));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= q) {
            return Err(Error::parse(lineno, format!("entry {} is not in [0, {})", bad, q)));
        }
        data.push(row);
    }
    if let Some((lineno, extra)) = lines.next_content() {
        return Err(Error::parse(lineno, format!("unexpected trailing content {:?}", extra)));
    }
    Matrix::from_rows(field, data)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.field().q());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an integer lattice basis; the header cardinality is 0 by
/// convention and is otherwise ignored.
pub fn parse_basis(text: &str) -> Result<LatticeBasis> {
    let mut lines = Lines::new(text);
    let (lineno, header) =
        lines.next_content().ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let nums: Vec<i64> = split_numbers(header, lineno)?;
    if nums.len() != 3 || nums[0] <= 0 || nums[1] <= 0 {
        return Err(Error::parse(lineno, format!("expected header `rows cols 0`, got {:?}", header)));
    }
    let (rows, cols) = (nums[0] as usize, nums[1] as usize);
    let mut data = Vec::with_capacity(rows);
    for r in 0..rows {
        let (lineno, line) = lines
            .next_content()
            .ok_or_else(|| Error::parse(0, format!("missing row {} of {}", r + 1, rows)))?;
        let row: Vec<BigInt> = line
            .split_whitespace()
            .map(|tok| {
                BigInt::from_str(tok)
                    .map_err(|_| Error::parse(lineno, format!("bad integer {:?}", tok)))
            })
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::parse(
                lineno,
                format!("expected {} entries, found {}", cols, row.len()),
            ));
        }
        data.push(row);
    }
    LatticeBasis::from_rows(data)
}

pub fn write_basis(b: &LatticeBasis) -> String {
    let mut out = format!("{} {} 0\n", b.num_rows(), b.dim());
    for row in b.rows() {
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// The field order a nonbinary alist declares on its lone second line,
/// if any; binary alists have none.
pub fn alist_declared_q(text: &str) -> Result<Option<u64>> {
    let mut lines = Lines::new(text);
    lines.next_content().ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let Some((lineno, second)) = lines.next_content() else {
        return Ok(None);
    };
    let nums: Vec<u64> = split_numbers(second, lineno)?;
    Ok(if nums.len() == 1 { Some(nums[0]) } else { None })
}

/// Parses an alist parity-check matrix over `field`. Binary alists list
/// plain indices; nonbinary alists carry `index value` pairs and may
/// declare `q` on its own line after `n m`.
pub fn parse_alist(text: &str, field: Field) -> Result<Matrix> {
    let q = field.q();
    let mut lines = Lines::new(text);
    let (lineno, header) =
        lines.next_content().ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let nums: Vec<usize> = split_numbers(header, lineno)?;
    if nums.len() != 2 {
        return Err(Error::parse(lineno, format!("expected `n m`, got {:?}", header)));
    }
    let (n, m) = (nums[0], nums[1]);
    if n == 0 || m == 0 {
        return Err(Error::parse(lineno, "alist dimensions must be positive".to_string()));
    }
    // Optional lone q line (nonbinary alist).
    let (lineno, line) =
        lines.next_content().ok_or_else(|| Error::parse(0, "truncated alist".to_string()))?;
    let first: Vec<u64> = split_numbers(line, lineno)?;
    let values_carried;
    let (dlineno, degree_line) = if first.len() == 1 {
        if first[0] != q {
            return Err(Error::parse(
                lineno,
                format!("alist declares GF({}) but the field spec says GF({})", first[0], q),
            ));
        }
        values_carried = true;
        lines.next_content().ok_or_else(|| Error::parse(0, "truncated alist".to_string()))?
    } else {
        values_carried = q > 2;
        (lineno, line)
    };
    let maxdeg: Vec<usize> = split_numbers(degree_line, dlineno)?;
    if maxdeg.len() != 2 {
        return Err(Error::parse(dlineno, "expected `max_col_degree max_row_degree`".to_string()));
    }
    let col_degrees = read_degree_list(&mut lines, n, "column")?;
    let row_degrees = read_degree_list(&mut lines, m, "row")?;

    // n column lists: indices of the rows each column participates in.
    let mut col_entries: Vec<Vec<(usize, u64)>> = Vec::with_capacity(n);
    for (c, &deg) in col_degrees.iter().enumerate() {
        let entries = read_entry_line(&mut lines, deg, values_carried, m, q, c + 1, "column")?;
        col_entries.push(entries);
    }
    // m row lists: indices of the columns each check touches.
    let mut h = Matrix::zero(field, m, n);
    for (r, &deg) in row_degrees.iter().enumerate() {
        let entries = read_entry_line(&mut lines, deg, values_carried, n, q, r + 1, "row")?;
        for (col, val) in entries {
            h.set(r, col - 1, val);
        }
    }
    // Cross-check the column lists against the assembled matrix.
    for (c, entries) in col_entries.iter().enumerate() {
        for &(row, val) in entries {
            let got = h.get(row - 1, c);
            let expect = if values_carried { val } else { 1 };
            if got != expect {
                return Err(Error::parse(
                    0,
                    format!(
                        "column list {} disagrees with the row lists at row {} ({} vs {})",
                        c + 1,
                        row,
                        expect,
                        got
                    ),
                ));
            }
        }
    }
    Ok(h)
}

fn read_degree_list(lines: &mut Lines, count: usize, what: &str) -> Result<Vec<usize>> {
    let (lineno, line) = lines
        .next_content()
        .ok_or_else(|| Error::parse(0, format!("missing {} degree list", what)))?;
    let degrees: Vec<usize> = split_numbers(line, lineno)?;
    if degrees.len() != count {
        return Err(Error::parse(
            lineno,
            format!("expected {} {} degrees, found {}", count, what, degrees.len()),
        ));
    }
    Ok(degrees)
}

fn read_entry_line(
    lines: &mut Lines,
    degree: usize,
    values_carried: bool,
    index_limit: usize,
    q: u64,
    which: usize,
    what: &str,
) -> Result<Vec<(usize, u64)>> {
    let (lineno, line) = lines
        .next_content()
        .ok_or_else(|| Error::parse(0, format!("missing {} list {}", what, which)))?;
    let nums: Vec<u64> = split_numbers(line, lineno)?;
    let width = if values_carried { 2 } else { 1 };
    if nums.len() % width != 0 {
        return Err(Error::parse(lineno, format!("expected index/value pairs, got {:?}", line)));
    }
    let mut out = Vec::with_capacity(degree);
    for chunk in nums.chunks(width) {
        let idx = chunk[0] as usize;
        if idx == 0 {
            continue; // zero padding
        }
        if idx > index_limit {
            return Err(Error::parse(
                lineno,
                format!("index {} out of range 1..={}", idx, index_limit),
            ));
        }
        let val = if values_carried { chunk[1] } else { 1 };
        if val == 0 || val >= q {
            return Err(Error::parse(lineno, format!("value {} is not in [1, {})", val, q)));
        }
        out.push((idx, val));
    }
    if out.len() != degree {
        return Err(Error::parse(
            lineno,
            format!(
                "{} list {} declares degree {} but has {} entries",
                what,
                which,
                degree,
                out.len()
            ),
        ));
    }
    Ok(out)
}

/// Renders a parity-check matrix in alist form (with values for q > 2).
pub fn write_alist(h: &Matrix) -> String {
    let q = h.field().q();
    let n = h.cols();
    let m = h.rows();
    let col_entries: Vec<Vec<(usize, u64)>> = (0..n)
        .map(|c| (0..m).filter(|&r| h.get(r, c) != 0).map(|r| (r + 1, h.get(r, c))).collect())
        .collect();
    let row_entries: Vec<Vec<(usize, u64)>> = (0..m)
        .map(|r| (0..n).filter(|&c| h.get(r, c) != 0).map(|c| (c + 1, h.get(r, c))).collect())
        .collect();
    let cmax = col_entries.iter().map(Vec::len).max().unwrap_or(0);
    let rmax = row_entries.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{} {}\n", n, m);
    if q > 2 {
        out.push_str(&format!("{}\n", q));
    }
    out.push_str(&format!("{} {}\n", cmax, rmax));
    let degrees = |v: &Vec<Vec<(usize, u64)>>| {
        v.iter().map(|e| e.len().to_string()).collect::<Vec<_>>().join(" ")
    };
    out.push_str(&degrees(&col_entries));
    out.push('\n');
    out.push_str(&degrees(&row_entries));
    out.push('\n');
    let write_entries = |out: &mut String, entries: &Vec<Vec<(usize, u64)>>| {
        for list in entries {
            let toks: Vec<String> = list
                .iter()
                .map(|&(i, v)| if q > 2 { format!("{} {}", i, v) } else { i.to_string() })
                .collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
    };
    write_entries(&mut out, &col_entries);
    write_entries(&mut out, &row_entries);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::LinearCode;

    #[test]
    fn field_spec_roundtrip() {
        assert_eq!(parse_field_spec("2").unwrap(), Field::gf2());
        assert_eq!(parse_field_spec("3").unwrap(), Field::gf3());
        let gf64 = parse_field_spec("2^6:0x43").unwrap();
        assert_eq!(gf64, Field::extension(6, Some(0x43)).unwrap());
        assert_eq!(gf64.spec_string(), "2^6:0x43");
        assert_eq!(parse_field_spec("2^6").unwrap(), gf64);
        assert!(parse_field_spec("4").is_err());
        assert!(parse_field_spec("2^6:43").is_err());
        assert!(parse_field_spec("banana").is_err());
    }

    #[test]
    fn field_for_order_inference() {
        assert_eq!(field_for_order(2).unwrap(), Field::gf2());
        assert_eq!(field_for_order(3).unwrap(), Field::gf3());
        assert_eq!(field_for_order(64).unwrap(), Field::extension(6, None).unwrap());
        assert!(field_for_order(6).is_err());
    }

    #[test]
    fn matrix_roundtrip() {
        let text = "2 3 3\n1 2 0\n0 1 2\n";
        let m = parse_matrix(text, Field::gf3()).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(0, 1), 2);
        assert_eq!(write_matrix(&m), text);
    }

    #[test]
    fn matrix_diagnostics_name_the_line() {
        let err = parse_matrix("2 3 3\n1 2 0\n0 1 9\n", Field::gf3()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_matrix("2 3 3\n1 2\n", Field::gf3()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_matrix("2 3 2\n1 0 1\n0 1 1\n", Field::gf3()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_matrix("1 1 3\n1\nnonsense\n", Field::gf3()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn basis_roundtrip() {
        let text = "2 2 0\n201 37\n-1648 297\n";
        let b = parse_basis(text).unwrap();
        assert_eq!(write_basis(&b), text);
        assert!(parse_basis("1 2 0\n1\n").is_err());
    }

    #[test]
    fn binary_alist_roundtrip() {
        // Hamming(7,4) parity-check in alist form.
        let c = crate::code::hamming74();
        let text = write_alist(c.parity_check());
        let h = parse_alist(&text, Field::gf2()).unwrap();
        assert_eq!(&h, c.parity_check());
        let back = LinearCode::from_parity(h).unwrap();
        assert_eq!(back.dim(), 4);
    }

    #[test]
    fn binary_alist_with_padding() {
        // 2x3 H = [[1,1,0],[0,1,1]], zero-padded to the max degree.
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2 0\n2 3 0\n";
        let h = parse_alist(text, Field::gf2()).unwrap();
        assert_eq!(h.rows(), 2);
        assert_eq!(h.cols(), 3);
        assert_eq!(h.get(0, 0), 1);
        assert_eq!(h.get(1, 2), 1);
        assert_eq!(h.get(0, 2), 0);
    }

    #[test]
    fn nonbinary_alist_roundtrip() {
        let f = Field::extension(6, None).unwrap();
        let rows = vec![vec![1, 0, 2, 5], vec![0, 3, 0, 1]];
        let h = Matrix::from_rows(f, rows).unwrap();
        let text = write_alist(&h);
        assert!(text.starts_with("4 2\n64\n"));
        let parsed = parse_alist(&text, f).unwrap();
        assert_eq!(parsed, h);
    }

    #[test]
    fn alist_consistency_check() {
        // Column lists describe the identity, row lists the anti-diagonal.
        let text = "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
        let err = parse_alist(text, Field::gf2()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn gf3_alist_parses_pairs() {
        let f = Field::gf3();
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1]];
        let h = Matrix::from_rows(f, rows).unwrap();
        let text = write_alist(&h);
        let parsed = parse_alist(&text, f).unwrap();
        assert_eq!(parsed, h);
    }
}
