//! A deliberately small XML element tree: elements hold either text or child
//! elements, attributes are ignored, namespaces prefixes are dropped.

use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::Event;
use quick_xml::Reader;

use super::WireError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    pub name: String,
    /// Character data; only meaningful when `children` is empty.
    pub text: String,
    pub children: Vec<Element>,
}

impl Element {
    pub fn text(name: impl Into<String>, text: impl Into<String>) -> Element {
        Element {
            name: name.into(),
            text: text.into(),
            children: Vec::new(),
        }
    }

    pub fn parent(name: impl Into<String>, children: Vec<Element>) -> Element {
        Element {
            name: name.into(),
            text: String::new(),
            children,
        }
    }

    pub fn child(&self, name: &str) -> Option<&Element> {
        self.children.iter().find(|c| c.name == name)
    }

    pub fn write_to(&self, out: &mut String) {
        out.push('<');
        out.push_str(&self.name);
        out.push('>');
        if self.children.is_empty() {
            escape_into(&self.text, out);
        } else {
            for child in &self.children {
                child.write_to(out);
            }
        }
        out.push_str("</");
        out.push_str(&self.name);
        out.push('>');
    }
}

pub fn escape_into(text: &str, out: &mut String) {
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Parsers normalize raw CR away.
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

fn malformed(msg: impl std::fmt::Display) -> WireError {
    WireError::MalformedXml(msg.to_string())
}

fn local_name(raw: &[u8]) -> Result<String, WireError> {
    let name = std::str::from_utf8(raw).map_err(malformed)?;
    Ok(name.rsplit(':').next().unwrap_or(name).to_string())
}

/// Parses a document with exactly one root element.
pub fn parse_document(bytes: &[u8]) -> Result<Element, WireError> {
    let text = std::str::from_utf8(bytes).map_err(|e| malformed(format!("not UTF-8: {e}")))?;
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;

    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;

    let close = |stack: &mut Vec<Element>, root: &mut Option<Element>, mut el: Element| {
        if !el.children.is_empty() {
            if !el.text.trim().is_empty() {
                return Err(malformed(format!("mixed content in <{}>", el.name)));
            }
            el.text.clear();
        }
        match stack.last_mut() {
            Some(parent) => parent.children.push(el),
            None => *root = Some(el),
        }
        Ok(())
    };

    loop {
        let event = reader.read_event().map_err(malformed)?;
        match event {
            Event::Start(_) | Event::Empty(_) if root.is_some() => {
                return Err(malformed("content after the root element"));
            }
            Event::Start(start) => {
                stack.push(Element::text(local_name(start.name().as_ref())?, ""));
            }
            Event::Empty(start) => {
                let el = Element::text(local_name(start.name().as_ref())?, "");
                close(&mut stack, &mut root, el)?;
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| malformed("unbalanced end tag"))?;
                close(&mut stack, &mut root, el)?;
            }
            Event::Text(t) => {
                let content = t.xml_content().map_err(malformed)?;
                match stack.last_mut() {
                    Some(el) => el.text.push_str(&content),
                    None if content.trim().is_empty() => {}
                    None => return Err(malformed("text outside the root element")),
                }
            }
            Event::CData(c) => {
                let content = c.decode().map_err(malformed)?;
                stack
                    .last_mut()
                    .ok_or_else(|| malformed("CDATA outside the root element"))?
                    .text
                    .push_str(&content);
            }
            Event::GeneralRef(r) => {
                let resolved = match r.resolve_char_ref().map_err(malformed)? {
                    Some(c) => c.to_string(),
                    None => {
                        let name = r.decode().map_err(malformed)?;
                        resolve_predefined_entity(&name)
                            .ok_or_else(|| malformed(format!("unknown entity &{name};")))?
                            .to_string()
                    }
                };
                stack
                    .last_mut()
                    .ok_or_else(|| malformed("reference outside the root element"))?
                    .text
                    .push_str(&resolved);
            }
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Eof => break,
        }
    }
    if !stack.is_empty() {
        return Err(malformed(format!("unclosed <{}>", stack[stack.len() - 1].name)));
    }
    root.ok_or_else(|| malformed("no root element"))
}
