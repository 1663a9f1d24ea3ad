//! Markdown to HTML with a source map.
//!
//! Every run of rendered text is wrapped in
//! `<span data-s="…" data-e="…">` giving the character range of the raw
//! source it came from, so the viewer can underline span anchors on the
//! rendered cell. Remote images and raw HTML that points off-page are
//! neutralised to keep the bundle offline.

use pulldown_cmark::{html, CowStr, Event, Options, Parser, Tag, TagEnd, TextMergeWithOffset};
use pulldown_cmark_escape::escape_html;

fn options() -> Options {
    Options::ENABLE_TABLES | Options::ENABLE_STRIKETHROUGH | Options::ENABLE_TASKLISTS | Options::ENABLE_MATH
}

fn is_remote(url: &str) -> bool {
    url.contains("://") || url.starts_with("//")
}

/// Byte offset → character offset lookup over one source string.
struct CharIndex(Vec<usize>);

impl CharIndex {
    fn new(s: &str) -> Self {
        let mut starts: Vec<usize> = s.char_indices().map(|(b, _)| b).collect();
        starts.push(s.len());
        Self(starts)
    }

    fn char_at(&self, byte: usize) -> usize {
        self.0.partition_point(|&b| b < byte)
    }
}

fn mapped_span(text: &str, start: usize, end: usize) -> String {
    let mut out = format!("<span data-s=\"{start}\" data-e=\"{end}\">");
    escape_html(&mut out, text).expect("writing to a String");
    out.push_str("</span>");
    out
}

/// Renders CommonMark to HTML, annotating text runs with source offsets.
#[must_use]
pub fn render_markdown(source: &str) -> String {
    let index = CharIndex::new(source);
    let mut remote_images = 0usize;
    // alt text of local images is an attribute, so it stays plain
    let mut local_images = 0usize;
    let parser = TextMergeWithOffset::new(Parser::new_ext(source, options()).into_offset_iter());
    let events = parser.map(|(event, range)| match event {
        Event::Text(text) if local_images == 0 => {
            let raw = &source[range.clone()];
            if raw == text.as_ref() {
                let html = mapped_span(&text, index.char_at(range.start), index.char_at(range.end));
                Event::InlineHtml(CowStr::from(html))
            } else {
                Event::Text(text)
            }
        }
        Event::Start(Tag::Image { link_type, dest_url, title, id }) if is_remote(&dest_url) => {
            remote_images += 1;
            Event::Start(Tag::Link { link_type, dest_url, title, id })
        }
        Event::End(TagEnd::Image) if remote_images > 0 => {
            remote_images -= 1;
            Event::End(TagEnd::Link)
        }
        Event::Start(Tag::Image { .. }) => {
            local_images += 1;
            event
        }
        Event::End(TagEnd::Image) => {
            local_images -= 1;
            event
        }
        Event::Html(raw) | Event::InlineHtml(raw) if raw.contains("://") => Event::Text(raw),
        other => other,
    });
    let mut out = String::with_capacity(source.len() * 2);
    html::push_html(&mut out, events);
    out
}
