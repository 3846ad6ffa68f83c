use chrono::{DateTime, SecondsFormat, Utc};

/// Parses an `xsd:dateTime` / RFC 3339 value carrying an explicit offset.
///
/// Values without a timezone are rejected: they cannot be mapped to a UTC
/// instant.
pub fn parse_datetime(lexical: &str) -> Option<DateTime<Utc>> {
    let trimmed = lexical.trim();
    if trimmed.len() != lexical.len() || !trimmed.contains('T') {
        return None;
    }
    DateTime::parse_from_rfc3339(trimmed)
        .ok()
        .map(|dt| dt.with_timezone(&Utc))
}

/// Formats an instant in the `YYYY-MM-DDThh:mm:ssZ` form. Fractional seconds
/// are kept only when non-zero.
pub fn format_datetime(instant: &DateTime<Utc>) -> String {
    instant.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

/// Normalized lexical form, or `None` when the value is not a dateTime.
pub fn normalize_datetime(lexical: &str) -> Option<String> {
    parse_datetime(lexical).map(|dt| format_datetime(&dt))
}
