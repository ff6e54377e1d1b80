//! The TOML Cartan file.
//!
//! ```toml
//! characteristic = 2
//! parities = ["ev", "od"]
//! matrix = [[1, [0, 1]], [1, 0]]
//!
//! [extension]
//! degree = 2
//! modulus = [1, 1, 1]
//! ```
//!
//! Matrix entries are integers (reduced mod `p`), coefficient lists for
//! extension-field elements (constant term first), or `"n/d"` strings in
//! characteristic 0. Strict mode rejects anything not already in canonical
//! form.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::cartan::{CartanDatum, Parity};
use crate::field::{format_rational, FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorCode {
    Syntax,
    Characteristic,
    Extension,
    ReducibleModulus,
    RaggedMatrix,
    ParityCount,
    ParityToken,
    Entry,
}

impl ParseErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorCode::Syntax => "E100-syntax",
            ParseErrorCode::Characteristic => "E101-characteristic",
            ParseErrorCode::Extension => "E102-extension",
            ParseErrorCode::ReducibleModulus => "E103-reducible-modulus",
            ParseErrorCode::RaggedMatrix => "E104-ragged-matrix",
            ParseErrorCode::ParityCount => "E105-parity-count",
            ParseErrorCode::ParityToken => "E106-parity-token",
            ParseErrorCode::Entry => "E107-entry",
        }
    }
}

/// A rejected Cartan file, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub code: ParseErrorCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: error[{}]: {}",
            self.line,
            self.column,
            self.code.as_str(),
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject unreduced integers, short coefficient lists and non-canonical
    /// rationals instead of normalising them.
    pub strict: bool,
}

/// One matrix entry as written in a file or a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Coeffs(Vec<i64>),
    Text(String),
}

impl Entry {
    pub fn from_element(e: &FieldElement) -> Self {
        if let Some(q) = e.rational() {
            return match (q.is_integer(), q.to_integer().to_i64()) {
                (true, Some(n)) => Entry::Int(n),
                _ => Entry::Text(format_rational(q)),
            };
        }
        let coeffs = e.residues().expect("finite field element");
        if e.spec().degree() == 1 {
            Entry::Int(coeffs[0] as i64)
        } else {
            Entry::Coeffs(coeffs.iter().map(|&c| c as i64).collect())
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    characteristic: Spanned<i64>,
    parities: Spanned<Vec<Spanned<String>>>,
    matrix: Spanned<Vec<Spanned<Vec<Spanned<Entry>>>>>,
    extension: Option<Spanned<RawExtension>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    degree: usize,
    modulus: Vec<i64>,
}

#[derive(Serialize)]
struct OutFile {
    characteristic: u64,
    parities: Vec<&'static str>,
    matrix: Vec<Vec<Entry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extension: Option<RawExtension>,
}

struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn error(
        &self,
        code: ParseErrorCode,
        span: Range<usize>,
        message: impl Into<String>,
    ) -> ParseError {
        let offset = span.start.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |nl| {
            before[nl + 1..].chars().count()
        }) + 1;
        ParseError {
            code,
            line,
            column,
            message: message.into(),
        }
    }
}

pub fn parse_cartan(text: &str, options: ParseOptions) -> Result<CartanDatum, ParseError> {
    let loc = Locator { text };
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        loc.error(
            ParseErrorCode::Syntax,
            e.span().unwrap_or(0..0),
            e.message().trim_end().to_string(),
        )
    })?;

    let spec = parse_field(&loc, &raw)?;

    let rows = raw.matrix.get_ref();
    let n = rows.len();
    if n == 0 {
        return Err(loc.error(
            ParseErrorCode::RaggedMatrix,
            raw.matrix.span(),
            "matrix is empty",
        ));
    }
    if let Some(row) = rows.iter().find(|r| r.get_ref().len() != n) {
        return Err(loc.error(
            ParseErrorCode::RaggedMatrix,
            row.span(),
            format!(
                "row has {} entries, expected {n} for a {n}x{n} matrix",
                row.get_ref().len()
            ),
        ));
    }

    let parity_tokens = raw.parities.get_ref();
    if parity_tokens.len() != n {
        return Err(loc.error(
            ParseErrorCode::ParityCount,
            raw.parities.span(),
            format!(
                "{} parities given for a rank-{n} matrix",
                parity_tokens.len()
            ),
        ));
    }
    let parities = parity_tokens
        .iter()
        .map(|token| {
            Parity::from_token(token.get_ref()).ok_or_else(|| {
                loc.error(
                    ParseErrorCode::ParityToken,
                    token.span(),
                    format!("parity must be \"ev\" or \"od\", got {:?}", token.get_ref()),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let entries = rows
        .iter()
        .map(|row| {
            row.get_ref()
                .iter()
                .map(|entry| {
                    parse_entry(&spec, entry.get_ref(), options)
                        .map_err(|msg| loc.error(ParseErrorCode::Entry, entry.span(), msg))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    CartanDatum::new(spec, entries, parities).map_err(|e| {
        loc.error(
            ParseErrorCode::RaggedMatrix,
            raw.matrix.span(),
            e.to_string(),
        )
    })
}

fn parse_field(loc: &Locator<'_>, raw: &RawFile) -> Result<Arc<FieldSpec>, ParseError> {
    let p_span = raw.characteristic.span();
    let p = *raw.characteristic.get_ref();
    let p = u64::try_from(p).map_err(|_| {
        loc.error(
            ParseErrorCode::Characteristic,
            p_span.clone(),
            "characteristic must be 0 or prime",
        )
    })?;
    let characteristic_error = |e: FieldError| {
        let message = match e {
            FieldError::NotPrime(_) => "characteristic must be 0 or prime".to_string(),
            other => other.to_string(),
        };
        loc.error(ParseErrorCode::Characteristic, p_span.clone(), message)
    };

    let Some(ext) = &raw.extension else {
        return if p == 0 {
            Ok(FieldSpec::rationals())
        } else {
            FieldSpec::prime(p).map_err(characteristic_error)
        };
    };
    let span = ext.span();
    let ext = ext.get_ref();
    if p == 0 {
        return Err(loc.error(
            ParseErrorCode::Extension,
            span,
            "characteristic 0 does not admit an extension",
        ));
    }
    FieldSpec::prime(p).map_err(characteristic_error)?;
    if ext.modulus.len() != ext.degree + 1 {
        return Err(loc.error(
            ParseErrorCode::Extension,
            span,
            FieldError::ModulusLength {
                expected: ext.degree + 1,
                got: ext.modulus.len(),
            }
            .to_string(),
        ));
    }
    let modulus = ext
        .modulus
        .iter()
        .map(|&c| u64::try_from(c).ok().filter(|&c| c < p))
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| {
            loc.error(
                ParseErrorCode::Extension,
                span.clone(),
                format!("modulus coefficients must lie in 0..{p}"),
            )
        })?;
    FieldSpec::extension(p, modulus).map_err(|e| {
        let code = match e {
            FieldError::Reducible(_) => ParseErrorCode::ReducibleModulus,
            _ => ParseErrorCode::Extension,
        };
        loc.error(code, span.clone(), e.to_string())
    })
}

fn parse_entry(
    spec: &Arc<FieldSpec>,
    entry: &Entry,
    options: ParseOptions,
) -> Result<FieldElement, String> {
    let p = spec.characteristic();
    if spec.is_rational() {
        return match entry {
            Entry::Int(n) => Ok(FieldElement::from_int(spec, *n as i128)),
            Entry::Text(s) => {
                let q = BigRational::from_str(s.trim())
                    .map_err(|_| format!("cannot parse {s:?} as a rational number"))?;
                if options.strict && format_rational(&q) != *s {
                    return Err(format!(
                        "{s:?} is not in lowest terms (expected {:?})",
                        format_rational(&q)
                    ));
                }
                FieldElement::from_rational(spec, q).map_err(|e| e.to_string())
            }
            Entry::Coeffs(_) => Err("coefficient lists are not allowed in characteristic 0".into()),
        };
    }
    let reduce = |c: i64| -> Result<u64, String> {
        if options.strict && !(0..p as i64).contains(&c) {
            return Err(format!("{c} is not reduced modulo {p}"));
        }
        Ok(c.rem_euclid(p as i64) as u64)
    };
    match entry {
        Entry::Int(n) => {
            reduce(*n)?;
            Ok(FieldElement::from_int(spec, *n as i128))
        }
        Entry::Coeffs(coeffs) => {
            let degree = spec.degree();
            if coeffs.len() > degree || (options.strict && coeffs.len() != degree) {
                return Err(format!(
                    "expected {degree} coefficients, got {}",
                    coeffs.len()
                ));
            }
            let reduced = coeffs
                .iter()
                .map(|&c| reduce(c))
                .collect::<Result<Vec<_>, _>>()?;
            FieldElement::from_residues(spec, &reduced).map_err(|e| e.to_string())
        }
        Entry::Text(s) => Err(format!(
            "{s:?}: string entries are only allowed in characteristic 0"
        )),
    }
}

/// Canonical TOML text for a datum. Parsing it (strictly or not) gives the
/// same datum back.
pub fn serialize_cartan(datum: &CartanDatum) -> String {
    let spec = datum.spec();
    let extension = (spec.degree() > 1).then(|| RawExtension {
        degree: spec.degree(),
        modulus: spec.modulus().iter().map(|&c| c as i64).collect(),
    });
    let out = OutFile {
        characteristic: spec.characteristic(),
        parities: datum.parities().iter().map(|p| p.token()).collect(),
        matrix: datum
            .entries()
            .iter()
            .map(|row| row.iter().map(Entry::from_element).collect())
            .collect(),
        extension,
    };
    toml::to_string(&out).expect("Cartan file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rational(numer: i64, denom: i64) -> Option<BigRational> {
        Some(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }
    use crate::cartan::Parity::{Even, Odd};

    fn parse(text: &str) -> Result<CartanDatum, ParseError> {
        parse_cartan(text, ParseOptions::default())
    }

    fn strict(text: &str) -> Result<CartanDatum, ParseError> {
        parse_cartan(text, ParseOptions { strict: true })
    }

    #[test]
    fn prime_field_file() {
        let datum =
            parse("characteristic = 3\nmatrix = [[0, 1], [1, 0]]\nparities = [\"ev\", \"ev\"]\n")
                .unwrap();
        assert_eq!(
            datum,
            CartanDatum::from_ints(3, &[vec![0, 1], vec![1, 0]], &[Even, Even]).unwrap()
        );
    }

    #[test]
    fn extension_field_file() {
        let text = r#"
characteristic = 2
parities = ["ev", "od"]
matrix = [[1, [0, 1]], [[1, 1], 0]]

[extension]
degree = 2
modulus = [1, 1, 1]
"#;
        let datum = parse(text).unwrap();
        assert_eq!(datum.spec().modulus(), &[1, 1, 1]);
        assert_eq!(datum.entry(0, 1).residues(), Some(&[0u64, 1][..]));
        assert_eq!(datum.parities(), &[Even, Odd]);
    }

    #[test]
    fn rational_file() {
        let text = "characteristic = 0\nparities = [\"ev\", \"ev\"]\nmatrix = [[2, \"-3\"], [\"1/2\", \"4/2\"]]\n";
        let datum = parse(text).unwrap();
        assert_eq!(datum.entry(1, 0).rational(), rational(1, 2).as_ref());
        assert_eq!(datum.entry(1, 1).rational(), rational(2, 1).as_ref());
        let err = strict(text).unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Entry);
        assert_eq!((err.line, err.column), (3, 30));
    }

    #[test]
    fn rejects_composite_characteristic() {
        let err = parse("characteristic = 4\nmatrix = [[0]]\nparities = [\"ev\"]\n").unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Characteristic);
        assert_eq!(err.message, "characteristic must be 0 or prime");
        assert_eq!((err.line, err.column), (1, 18));
        let err = parse("characteristic = -2\nmatrix = [[0]]\nparities = [\"ev\"]\n").unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Characteristic);
    }

    #[test]
    fn rejects_reducible_modulus() {
        let text = "characteristic = 2\nmatrix = [[0]]\nparities = [\"ev\"]\nextension = { degree = 2, modulus = [1, 0, 1] }\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.code, ParseErrorCode::ReducibleModulus);
        assert_eq!(err.line, 4);
    }

    #[test]
    fn rejects_bad_extension() {
        let cases = [
            "characteristic = 2\nmatrix = [[0]]\nparities = [\"ev\"]\nextension = { degree = 3, modulus = [1, 1, 1] }\n",
            "characteristic = 3\nmatrix = [[0]]\nparities = [\"ev\"]\nextension = { degree = 2, modulus = [1, 0, 2] }\n",
            "characteristic = 3\nmatrix = [[0]]\nparities = [\"ev\"]\nextension = { degree = 2, modulus = [1, 0, 4] }\n",
            "characteristic = 0\nmatrix = [[0]]\nparities = [\"ev\"]\nextension = { degree = 2, modulus = [1, 0, 1] }\n",
        ];
        for text in cases {
            assert_eq!(
                parse(text).unwrap_err().code,
                ParseErrorCode::Extension,
                "{text}"
            );
        }
    }

    #[test]
    fn rejects_ragged_matrix() {
        let err = parse(
            "characteristic = 5\nmatrix = [\n  [0, 1],\n  [1],\n]\nparities = [\"ev\", \"ev\"]\n",
        )
        .unwrap_err();
        assert_eq!(err.code, ParseErrorCode::RaggedMatrix);
        assert_eq!((err.line, err.column), (4, 3));
        let err = parse("characteristic = 5\nmatrix = []\nparities = []\n").unwrap_err();
        assert_eq!(err.code, ParseErrorCode::RaggedMatrix);
    }

    #[test]
    fn rejects_parity_problems() {
        let err = parse("characteristic = 5\nmatrix = [[0, 1], [1, 0]]\nparities = [\"ev\"]\n")
            .unwrap_err();
        assert_eq!(err.code, ParseErrorCode::ParityCount);
        let err =
            parse("characteristic = 5\nmatrix = [[0, 1], [1, 0]]\nparities = [\"ev\", \"odd\"]\n")
                .unwrap_err();
        assert_eq!(err.code, ParseErrorCode::ParityToken);
        assert_eq!((err.line, err.column), (3, 19));
    }

    #[test]
    fn entry_reduction_and_strict_mode() {
        let text = "characteristic = 5\nmatrix = [[7, -1], [1, 0]]\nparities = [\"ev\", \"ev\"]\n";
        let datum = parse(text).unwrap();
        assert_eq!(
            datum,
            CartanDatum::from_ints(5, &[vec![2, 4], vec![1, 0]], &[Even, Even]).unwrap()
        );
        let err = strict(text).unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Entry);
        assert_eq!((err.line, err.column), (2, 12));

        for bad in ["[[\"1/2\"]]", "[[[1, 2]]]"] {
            let text = format!("characteristic = 5\nmatrix = {bad}\nparities = [\"ev\"]\n");
            assert_eq!(
                parse(&text).unwrap_err().code,
                ParseErrorCode::Entry,
                "{bad}"
            );
        }
        let text = "characteristic = 0\nmatrix = [[[1, 2]]]\nparities = [\"ev\"]\n";
        assert_eq!(parse(text).unwrap_err().code, ParseErrorCode::Entry);
        let text = "characteristic = 0\nmatrix = [[\"x/2\"]]\nparities = [\"ev\"]\n";
        assert_eq!(parse(text).unwrap_err().code, ParseErrorCode::Entry);
    }

    #[test]
    fn syntax_errors_are_located() {
        let err = parse("characteristic = 5\nmatrix = [[0, 1]\nparities = [\"ev\"]\n").unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Syntax);
        assert!(err.line >= 2, "{err}");
        let err = parse("characteristic = 5\nmatrix = [[0]]\nparities = [\"ev\"]\ncolour = 1\n")
            .unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Syntax);
        let err = parse("characteristic = 5\nmatrix = [[0]]\n").unwrap_err();
        assert_eq!(err.code, ParseErrorCode::Syntax);
    }

    #[test]
    fn serialized_form() {
        let datum = CartanDatum::from_ints(3, &[vec![0, 1], vec![1, 0]], &[Even, Odd]).unwrap();
        assert_eq!(
            serialize_cartan(&datum),
            "characteristic = 3\nparities = [\"ev\", \"od\"]\nmatrix = [[0, 1], [1, 0]]\n"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn datum_strategy() -> impl Strategy<Value = CartanDatum> {
            let field = prop_oneof![
                Just((0u64, vec![])),
                Just((2, vec![])),
                Just((7, vec![])),
                Just((2, vec![1, 1, 1])),
                Just((3, vec![1, 0, 1])),
                Just((2, vec![1, 1, 0, 1])),
            ];
            (field, 1usize..5).prop_flat_map(|((p, modulus), n)| {
                let cells = n * n;
                (
                    Just((p, modulus, n)),
                    prop::collection::vec((any::<i64>(), 1i64..50, any::<[u8; 3]>()), cells),
                    prop::collection::vec(any::<bool>(), n),
                )
                    .prop_map(|((p, modulus, n), cells, odd)| {
                        let spec = match (p, modulus.is_empty()) {
                            (0, _) => FieldSpec::rationals(),
                            (p, true) => FieldSpec::prime(p).unwrap(),
                            (p, false) => FieldSpec::extension(p, modulus).unwrap(),
                        };
                        let entries = cells
                            .chunks(n)
                            .map(|row| {
                                row.iter()
                                    .map(|&(a, d, c)| {
                                        if spec.is_rational() {
                                            FieldElement::from_rational(
                                                &spec,
                                                rational(a % 1000, d).unwrap(),
                                            )
                                            .unwrap()
                                        } else {
                                            let coeffs: Vec<u64> = c
                                                .iter()
                                                .take(spec.degree())
                                                .map(|&x| x as u64 % spec.characteristic())
                                                .collect();
                                            FieldElement::from_residues(&spec, &coeffs).unwrap()
                                        }
                                    })
                                    .collect()
                            })
                            .collect();
                        let parities = odd.iter().map(|&o| if o { Odd } else { Even }).collect();
                        CartanDatum::new(spec, entries, parities).unwrap()
                    })
            })
        }

        proptest! {
            #[test]
            fn parse_serialize_round_trip(datum in datum_strategy()) {
                let text = serialize_cartan(&datum);
                prop_assert_eq!(&parse(&text).unwrap(), &datum);
                prop_assert_eq!(&strict(&text).unwrap(), &datum);
                prop_assert_eq!(serialize_cartan(&strict(&text).unwrap()), text);
            }
        }
    }
}
