//! Layout configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::Lu;

/// Geometry and typography constants used by measurement and layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LayoutConfig {
    pub left_column_width: Lu,
    pub right_column_width: Lu,
    pub column_gap: Lu,
    pub cell_gap: Lu,
    pub cell_padding: Lu,
    pub line_height: Lu,
    pub avg_char_width: Lu,
    pub min_cell_height: Lu,
    pub default_text_height: Lu,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            left_column_width: Lu(420.0),
            right_column_width: Lu(560.0),
            column_gap: Lu(80.0),
            cell_gap: Lu(16.0),
            cell_padding: Lu(12.0),
            line_height: Lu(20.0),
            avg_char_width: Lu(8.0),
            min_cell_height: Lu(40.0),
            default_text_height: Lu(120.0),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("`{field}` must be positive and finite, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("defaultTextHeight ({default}) is below minCellHeight ({min})")]
    DefaultBelowMinimum { default: f64, min: f64 },
    #[error("cell padding leaves no room for content in the {column} column")]
    NoContentWidth { column: &'static str },
}

impl LayoutConfig {
    /// Width available to wrapped markdown inside a left-column cell.
    #[must_use]
    pub fn left_text_width(&self) -> Lu {
        self.left_column_width - self.cell_padding * 2.0
    }

    /// Width that right-column images are scaled to.
    #[must_use]
    pub fn right_content_width(&self) -> Lu {
        self.right_column_width - self.cell_padding * 2.0
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            ("leftColumnWidth", self.left_column_width),
            ("rightColumnWidth", self.right_column_width),
            ("columnGap", self.column_gap),
            ("cellGap", self.cell_gap),
            ("cellPadding", self.cell_padding),
            ("lineHeight", self.line_height),
            ("avgCharWidth", self.avg_char_width),
            ("minCellHeight", self.min_cell_height),
            ("defaultTextHeight", self.default_text_height),
        ];
        for (field, value) in fields {
            if !(value.get().is_finite() && value.get() > 0.0) {
                return Err(ConfigError::NotPositive { field, value: value.get() });
            }
        }
        if self.default_text_height < self.min_cell_height {
            return Err(ConfigError::DefaultBelowMinimum {
                default: self.default_text_height.get(),
                min: self.min_cell_height.get(),
            });
        }
        if self.left_text_width().get() <= 0.0 {
            return Err(ConfigError::NoContentWidth { column: "left" });
        }
        if self.right_content_width().get() <= 0.0 {
            return Err(ConfigError::NoContentWidth { column: "right" });
        }
        Ok(())
    }

    /// Applies every field that is set in `patch`.
    #[must_use]
    pub fn with_patch(mut self, patch: &LayoutConfigPatch) -> Self {
        macro_rules! apply {
            ($($f:ident),*) => {$(
                if let Some(v) = patch.$f { self.$f = Lu(v); }
            )*};
        }
        apply!(
            left_column_width,
            right_column_width,
            column_gap,
            cell_gap,
            cell_padding,
            line_height,
            avg_char_width,
            min_cell_height,
            default_text_height
        );
        self
    }
}

/// Partial configuration, as read from a config file or command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LayoutConfigPatch {
    pub left_column_width: Option<f64>,
    pub right_column_width: Option<f64>,
    pub column_gap: Option<f64>,
    pub cell_gap: Option<f64>,
    pub cell_padding: Option<f64>,
    pub line_height: Option<f64>,
    pub avg_char_width: Option<f64>,
    pub min_cell_height: Option<f64>,
    pub default_text_height: Option<f64>,
}
