//! Language identifiers and display names for the 19-language matrix.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// One of the 19 languages in the translation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Py,
    Js,
    Cpp,
    Jv,
    Ts,
    Php,
    Rb,
    Cs,
    Go,
    Pl,
    R,
    Rs,
    Sc,
    Sw,
    Sh,
    Lua,
    Rkt,
    Jl,
    D,
}

impl Language {
    pub const ALL: [Language; 19] = [
        Language::Py,
        Language::Js,
        Language::Cpp,
        Language::Jv,
        Language::Ts,
        Language::Php,
        Language::Rb,
        Language::Cs,
        Language::Go,
        Language::Pl,
        Language::R,
        Language::Rs,
        Language::Sc,
        Language::Sw,
        Language::Sh,
        Language::Lua,
        Language::Rkt,
        Language::Jl,
        Language::D,
    ];

    /// Short id used in record files and direction strings (e.g. "py", "jv").
    pub fn id(self) -> &'static str {
        match self {
            Language::Py => "py",
            Language::Js => "js",
            Language::Cpp => "cpp",
            Language::Jv => "jv",
            Language::Ts => "ts",
            Language::Php => "php",
            Language::Rb => "rb",
            Language::Cs => "cs",
            Language::Go => "go",
            Language::Pl => "pl",
            Language::R => "r",
            Language::Rs => "rs",
            Language::Sc => "sc",
            Language::Sw => "sw",
            Language::Sh => "sh",
            Language::Lua => "lua",
            Language::Rkt => "rkt",
            Language::Jl => "jl",
            Language::D => "d",
        }
    }

    /// Name used in prompt headers ("### Python version").
    pub fn display_name(self) -> &'static str {
        match self {
            Language::Py => "Python",
            Language::Js => "JavaScript",
            Language::Cpp => "C++",
            Language::Jv => "Java",
            Language::Ts => "TypeScript",
            Language::Php => "PHP",
            Language::Rb => "Ruby",
            Language::Cs => "C#",
            Language::Go => "Go",
            Language::Pl => "Perl",
            Language::R => "R",
            Language::Rs => "Rust",
            Language::Sc => "Scala",
            Language::Sw => "Swift",
            Language::Sh => "Bash",
            Language::Lua => "Lua",
            Language::Rkt => "Racket",
            Language::Jl => "Julia",
            Language::D => "D",
        }
    }

    /// Markdown fence tag ("```java") used when scrubbing target-specific text.
    pub fn fence_tag(self) -> &'static str {
        match self {
            Language::Py => "python",
            Language::Js => "javascript",
            Language::Cpp => "cpp",
            Language::Jv => "java",
            Language::Ts => "typescript",
            Language::Php => "php",
            Language::Rb => "ruby",
            Language::Cs => "csharp",
            Language::Go => "go",
            Language::Pl => "perl",
            Language::R => "r",
            Language::Rs => "rust",
            Language::Sc => "scala",
            Language::Sw => "swift",
            Language::Sh => "bash",
            Language::Lua => "lua",
            Language::Rkt => "racket",
            Language::Jl => "julia",
            Language::D => "d",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::ALL
            .iter()
            .copied()
            .find(|l| l.id() == s)
            .ok_or_else(|| format!("unknown language id: {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for lang in Language::ALL {
            assert_eq!(lang.id().parse::<Language>().unwrap(), lang);
        }
    }

    #[test]
    fn nineteen_languages() {
        assert_eq!(Language::ALL.len(), 19);
    }
}
