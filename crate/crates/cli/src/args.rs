use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use interlink_core::{LayoutConfigPatch, LayoutMode};

/// Render notebooks side by side with their text, code and output linked.
#[derive(Debug, Parser)]
#[command(name = "interlink", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lay out a notebook and write the layout and/or an HTML bundle.
    Render(Box<RenderArgs>),
    /// Check a relationship file against its notebook.
    Lint(LintArgs),
    /// Count relationships per class.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitKind {
    Html,
    LayoutJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Linear,
    SideBySide,
}

impl From<Mode> for LayoutMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Linear => LayoutMode::Linear,
            Mode::SideBySide => LayoutMode::SideBySide,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Notebook (.ipynb), or a directory of notebooks each with a NAME.rel.json beside it.
    #[arg(long)]
    pub notebook: PathBuf,
    /// Relationship file. Defaults to NAME.rel.json next to the notebook.
    #[arg(long)]
    pub relationships: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// What to write.
    #[arg(long, value_delimiter = ',', default_value = "html,layout-json")]
    pub emit: Vec<EmitKind>,
    /// JSON file overriding layout defaults; flags override the file.
    #[arg(long, env = "INTERLINK_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub layout: LayoutFlags,
    /// Directory holding the built viewer.js and viewer.css.
    #[arg(long, env = "INTERLINK_VIEWER_DIR")]
    pub viewer_dir: Option<PathBuf>,
    /// Presentation shown when the page opens.
    #[arg(long, value_enum, default_value_t = Mode::SideBySide)]
    pub default_mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct LintArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Notebook whose NAME.rel.json should be counted; classes come from the relationship file alone.
    #[arg(long, required_unless_present = "relationships")]
    pub notebook: Option<PathBuf>,
    /// Relationship file, or a directory of *.rel.json files counted together.
    #[arg(long)]
    pub relationships: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Per-field layout overrides, in layout units.
#[derive(Debug, Clone, Default, Args)]
pub struct LayoutFlags {
    #[arg(long, value_name = "LU")]
    pub left_column_width: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub right_column_width: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub column_gap: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub cell_gap: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub cell_padding: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub line_height: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub avg_char_width: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub min_cell_height: Option<f64>,
    #[arg(long, value_name = "LU")]
    pub default_text_height: Option<f64>,
}

impl From<&LayoutFlags> for LayoutConfigPatch {
    fn from(f: &LayoutFlags) -> Self {
        LayoutConfigPatch {
            left_column_width: f.left_column_width,
            right_column_width: f.right_column_width,
            column_gap: f.column_gap,
            cell_gap: f.cell_gap,
            cell_padding: f.cell_padding,
            line_height: f.line_height,
            avg_char_width: f.avg_char_width,
            min_cell_height: f.min_cell_height,
            default_text_height: f.default_text_height,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn emit_list_and_defaults() {
        let cli =
            Cli::parse_from(["interlink", "render", "--notebook", "a.ipynb", "--out", "o", "--emit", "layout-json"]);
        let Command::Render(r) = cli.command else { panic!() };
        assert_eq!(r.emit, [EmitKind::LayoutJson]);
        assert_eq!(r.default_mode, Mode::SideBySide);

        let cli = Cli::parse_from(["interlink", "render", "--notebook", "a.ipynb", "--out", "o", "--cell-gap", "8"]);
        let Command::Render(r) = cli.command else { panic!() };
        assert_eq!(r.emit, [EmitKind::Html, EmitKind::LayoutJson]);
        assert_eq!(LayoutConfigPatch::from(&r.layout).cell_gap, Some(8.0));
    }

    #[test]
    fn render_requires_out() {
        assert!(Cli::try_parse_from(["interlink", "render", "--notebook", "a.ipynb"]).is_err());
    }
}
