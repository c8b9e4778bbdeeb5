//! Display formatting for numbers and date headers.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeStyle {
    /// `(1,839)`, the usual convention in financial statements.
    Parentheses,
    /// `-1,839`
    Minus,
}

pub fn format_number(value: i64, negative_style: NegativeStyle, thousands_separator: bool) -> String {
    let digits = value.unsigned_abs().to_string();
    let magnitude = if thousands_separator {
        group_thousands(&digits)
    } else {
        digits
    };
    if value >= 0 {
        return magnitude;
    }
    match negative_style {
        NegativeStyle::Parentheses => format!("({magnitude})"),
        NegativeStyle::Minus => format!("-{magnitude}"),
    }
}

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// Inverse of [`format_number`] for either negative style.
pub fn parse_number(text: &str) -> Option<i64> {
    let (negative, body) = if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        (true, inner)
    } else if let Some(inner) = text.strip_prefix('-') {
        (true, inner)
    } else {
        (false, text)
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == ',') {
        return None;
    }
    let magnitude: i64 = body.replace(',', "").parse().ok()?;
    Some(if negative { -magnitude } else { magnitude })
}

/// Supported column-header date patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DateFormat {
    /// `DD.MM.YY`, e.g. `30.11.74`. Two-digit years map to 1970..=2069.
    DotShortYear,
    /// `DD Month YYYY`, e.g. `30 November 1974`.
    LongMonth,
    /// `DD/MM/YYYY`
    SlashFullYear,
    /// `YYYY`
    Year,
}

impl DateFormat {
    pub const ALL: [DateFormat; 4] = [
        DateFormat::DotShortYear,
        DateFormat::LongMonth,
        DateFormat::SlashFullYear,
        DateFormat::Year,
    ];

    pub fn pattern(&self) -> &'static str {
        match self {
            DateFormat::DotShortYear => "DD.MM.YY",
            DateFormat::LongMonth => "DD Month YYYY",
            DateFormat::SlashFullYear => "DD/MM/YYYY",
            DateFormat::Year => "YYYY",
        }
    }

    fn strftime(&self) -> &'static str {
        match self {
            DateFormat::DotShortYear => "%d.%m.%y",
            DateFormat::LongMonth => "%d %B %Y",
            DateFormat::SlashFullYear => "%d/%m/%Y",
            DateFormat::Year => "%Y",
        }
    }

    pub fn format(&self, date: NaiveDate) -> String {
        date.format(self.strftime()).to_string()
    }

    /// Parses text produced by [`DateFormat::format`]. Patterns without a
    /// day and month resolve to 1 January.
    pub fn parse(&self, text: &str) -> Result<NaiveDate> {
        let bad = |e: String| Error::Config(format!("cannot parse {text:?} as {}: {e}", self.pattern()));
        match self {
            DateFormat::Year => {
                if text.len() != 4 {
                    return Err(bad("expected four digits".into()));
                }
                let year: i32 = text.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                NaiveDate::from_ymd_opt(year, 1, 1).ok_or_else(|| bad("year out of range".into()))
            }
            _ => NaiveDate::parse_from_str(text, self.strftime()).map_err(|e| bad(e.to_string())),
        }
    }

    /// The part of `date` this pattern can represent.
    pub fn truncate(&self, date: NaiveDate) -> NaiveDate {
        match self {
            DateFormat::Year => NaiveDate::from_ymd_opt(date.year(), 1, 1).expect("valid year"),
            _ => date,
        }
    }
}

impl fmt::Display for DateFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pattern())
    }
}

impl FromStr for DateFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DateFormat::ALL
            .into_iter()
            .find(|f| f.pattern() == s)
            .ok_or_else(|| Error::Config(format!("unsupported date pattern {s:?}")))
    }
}

impl TryFrom<String> for DateFormat {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DateFormat> for String {
    fn from(f: DateFormat) -> Self {
        f.pattern().to_owned()
    }
}

/// Formats `date` with a pattern given as text.
pub fn format_date(date: NaiveDate, pattern: &str) -> Result<String> {
    Ok(pattern.parse::<DateFormat>()?.format(date))
}
