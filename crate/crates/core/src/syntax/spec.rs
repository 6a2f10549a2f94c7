//! `.hspec` parsing and elaboration.
//!
//! A file is a sequence of `spec <Name> = ... end` blocks. Base blocks
//! (`logic : PROP | RigidFOL | RigidCASL`) declare base signatures; hybrid
//! blocks (`hlogic : H<base>[C]`) import base blocks with `data`, declare
//! nominals, modalities and frame constraints, and carry `.`-prefixed
//! axioms. Elaboration resolves names against the assembled signature as it
//! goes, so every diagnostic points at source text.

use super::lexer::{lex, Token, TokenKind};
use super::{Diagnostic, RESERVED};
use crate::base::{
    BaseSentence, BaseSignature, OpDecl, PropSignature, RelDecl, RfolSignature, Rigidity, Term,
};
use crate::hybrid::{check_wellformed, HybridSentence, HybridSignature, HybridTheory};
use crate::kripke::{ConstraintSet, FrameProperty};
use indexmap::IndexMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseTag {
    Prop,
    RigidFol,
    /// Accepted alias of RigidFOL; partial functions are out of scope, so
    /// the two coincide here.
    RigidCasl,
}

impl BaseTag {
    pub fn spelling(self) -> &'static str {
        match self {
            BaseTag::Prop => "PROP",
            BaseTag::RigidFol => "RigidFOL",
            BaseTag::RigidCasl => "RigidCASL",
        }
    }

    fn parse(s: &str) -> Option<BaseTag> {
        match s {
            "PROP" => Some(BaseTag::Prop),
            "RigidFOL" => Some(BaseTag::RigidFol),
            "RigidCASL" => Some(BaseTag::RigidCasl),
            _ => None,
        }
    }

    fn is_prop(self) -> bool {
        matches!(self, BaseTag::Prop)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridTag {
    pub base: BaseTag,
    pub constrained: bool,
}

impl HybridTag {
    pub fn spelling(self) -> String {
        format!(
            "H{}{}",
            self.base.spelling(),
            if self.constrained { "C" } else { "" }
        )
    }

    fn parse(s: &str) -> Option<HybridTag> {
        let rest = s.strip_prefix('H')?;
        let (body, constrained) = match rest.strip_suffix('C') {
            // `HRigidCASLC` ends with C twice; try the constrained reading
            // first and fall back to the bare tag.
            Some(body) if BaseTag::parse(body).is_some() => (body, true),
            _ => (rest, false),
        };
        Some(HybridTag {
            base: BaseTag::parse(body)?,
            constrained,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlock {
    pub name: String,
    pub tag: BaseTag,
    pub signature: BaseSignature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridBlock {
    pub name: String,
    pub tag: HybridTag,
    pub imports: Vec<String>,
    pub theory: HybridTheory,
    pub constraints: ConstraintSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecBlock {
    Base(BaseBlock),
    Hybrid(HybridBlock),
}

impl SpecBlock {
    pub fn name(&self) -> &str {
        match self {
            SpecBlock::Base(b) => &b.name,
            SpecBlock::Hybrid(h) => &h.name,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecFile {
    pub blocks: Vec<SpecBlock>,
}

impl SpecFile {
    pub fn theories(&self) -> Vec<&HybridTheory> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                SpecBlock::Hybrid(h) => Some(&h.theory),
                SpecBlock::Base(_) => None,
            })
            .collect()
    }

    pub fn hybrid_blocks(&self) -> impl Iterator<Item = &HybridBlock> {
        self.blocks.iter().filter_map(|b| match b {
            SpecBlock::Hybrid(h) => Some(h),
            SpecBlock::Base(_) => None,
        })
    }

    pub fn find_hybrid(&self, name: &str) -> Option<&HybridBlock> {
        self.hybrid_blocks().find(|h| h.name == name)
    }

    pub fn axiom_count(&self) -> usize {
        self.hybrid_blocks().map(|h| h.theory.axioms.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseOptions {
    /// Stop at the first diagnostic instead of recovering and collecting.
    pub stop_at_first_error: bool,
}

/// Parses a specification file, collecting as many diagnostics as possible.
pub fn parse_spec(text: &str) -> Result<SpecFile, Vec<Diagnostic>> {
    parse_spec_named(text, "<input>", &ParseOptions::default())
}

pub fn parse_spec_named(
    text: &str,
    file: &str,
    opts: &ParseOptions,
) -> Result<SpecFile, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
    let mut parser = Parser {
        tokens,
        pos: 0,
        file: file.to_string(),
        lines,
        diagnostics: Vec::new(),
        stop_early: opts.stop_at_first_error,
    };
    let spec = parser.file();
    if parser.diagnostics.is_empty() {
        Ok(spec)
    } else {
        Err(parser.diagnostics)
    }
}

pub(super) struct Parser {
    pub tokens: Vec<Token>,
    pub pos: usize,
    pub file: String,
    pub lines: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub stop_early: bool,
}

/// Sentinel error: the diagnostic has already been recorded.
pub(super) struct Failed;

type PResult<T> = Result<T, Failed>;

impl Parser {
    pub(super) fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    pub(super) fn peek_token(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub(super) fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub(super) fn at_eof(&self) -> bool {
        matches!(self.peek(), TokenKind::Eof)
    }

    pub(super) fn excerpt(&self, line: usize) -> String {
        self.lines.get(line.saturating_sub(1)).cloned().unwrap_or_default()
    }

    pub(super) fn error_at(&mut self, token: &Token, message: String) -> Failed {
        let d = Diagnostic::error(
            &self.file,
            token.line,
            token.col,
            message,
            self.excerpt(token.line),
        );
        self.diagnostics.push(d);
        Failed
    }

    pub(super) fn error_here(&mut self, message: String) -> Failed {
        let t = self.peek_token().clone();
        self.error_at(&t, message)
    }

    pub(super) fn should_stop(&self) -> bool {
        self.stop_early && !self.diagnostics.is_empty()
    }

    /// Consumes a specific token or reports what was found.
    pub(super) fn expect(&mut self, kind: &TokenKind) -> PResult<Token> {
        if self.peek() == kind {
            Ok(self.bump())
        } else {
            let found = self.peek().describe();
            Err(self.error_here(format!("expected {}, found {}", kind.describe(), found)))
        }
    }

    pub(super) fn expect_ident(&mut self) -> PResult<(String, Token)> {
        match self.peek().clone() {
            TokenKind::Ident(name) => Ok((name, self.bump())),
            other => Err(self.error_here(format!(
                "expected an identifier, found {}",
                other.describe()
            ))),
        }
    }

    /// Identifier or numeral; numerals may name nullary ops.
    pub(super) fn expect_symbol_name(&mut self) -> PResult<(String, Token)> {
        match self.peek().clone() {
            TokenKind::Ident(name) | TokenKind::Number(name) => Ok((name, self.bump())),
            other => Err(self.error_here(format!(
                "expected a symbol name, found {}",
                other.describe()
            ))),
        }
    }

    pub(super) fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == kw)
    }

    pub(super) fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(super) fn expect_kw(&mut self, kw: &str) -> PResult<Token> {
        if self.is_kw(kw) {
            Ok(self.bump())
        } else {
            let found = self.peek().describe();
            Err(self.error_here(format!("expected `{kw}`, found {found}")))
        }
    }

    fn file(&mut self) -> SpecFile {
        let mut spec = SpecFile::default();
        while !self.at_eof() && !self.should_stop() {
            if self.is_kw("spec") {
                match self.block(&spec) {
                    Ok(block) => {
                        if spec.blocks.iter().any(|b| b.name() == block.name()) {
                            let t = self.peek_token().clone();
                            let name = block.name().to_string();
                            self.error_at(&t, format!("duplicate spec name `{name}`"));
                        } else {
                            spec.blocks.push(block);
                        }
                    }
                    Err(Failed) => self.recover_to_next_spec(),
                }
            } else {
                self.error_here(format!(
                    "expected `spec`, found {}",
                    self.peek().describe()
                ));
                self.recover_to_next_spec();
            }
        }
        spec
    }

    fn recover_to_next_spec(&mut self) {
        while !self.at_eof() && !self.is_kw("spec") {
            self.bump();
        }
    }

    fn block(&mut self, spec: &SpecFile) -> PResult<SpecBlock> {
        self.expect_kw("spec")?;
        let (name, name_tok) = self.expect_ident()?;
        self.expect(&TokenKind::Equals)?;
        if self.is_kw("logic") {
            self.bump();
            self.expect(&TokenKind::Colon)?;
            let (tag_name, tag_tok) = self.expect_ident()?;
            let tag = BaseTag::parse(&tag_name).ok_or_else(|| {
                self.error_at(
                    &tag_tok,
                    format!("unknown base logic `{tag_name}` (expected PROP, RigidFOL or RigidCASL)"),
                )
            })?;
            let signature = self.base_declarations(tag)?;
            self.expect_kw("end")?;
            Ok(SpecBlock::Base(BaseBlock { name, tag, signature }))
        } else if self.is_kw("hlogic") {
            self.bump();
            self.expect(&TokenKind::Colon)?;
            let (tag_name, tag_tok) = self.expect_ident()?;
            let tag = HybridTag::parse(&tag_name).ok_or_else(|| {
                self.error_at(
                    &tag_tok,
                    format!("unknown hybrid logic `{tag_name}` (expected H<base> with optional C suffix)"),
                )
            })?;
            self.hybrid_block(spec, name, tag)
        } else {
            Err(self.error_at(
                &name_tok,
                "a spec block starts with `logic :` or `hlogic :`".into(),
            ))
        }
    }

    fn check_declarable(&mut self, name: &str, tok: &Token) -> PResult<()> {
        if RESERVED.contains(&name) {
            return Err(self.error_at(tok, format!("`{name}` is reserved and cannot be declared")));
        }
        Ok(())
    }

    fn base_declarations(&mut self, tag: BaseTag) -> PResult<BaseSignature> {
        let mut prop = PropSignature::default();
        let mut rfol = RfolSignature::default();
        loop {
            if self.is_kw("end") || self.at_eof() {
                break;
            }
            let rigid = self.eat_kw("rigid");
            if self.is_kw("sort") {
                let kw = self.bump();
                if tag.is_prop() {
                    return Err(self.error_at(&kw, "PROP blocks declare atoms, not sorts".into()));
                }
                let (sort, tok) = self.expect_ident()?;
                self.check_declarable(&sort, &tok)?;
                if rfol.sorts.insert(sort.clone(), rigidity(rigid)).is_some() {
                    return Err(self.error_at(&tok, format!("duplicate sort `{sort}`")));
                }
            } else if self.is_kw("op") {
                let kw = self.bump();
                if tag.is_prop() {
                    return Err(self.error_at(&kw, "PROP blocks declare atoms, not ops".into()));
                }
                let (op, tok) = self.expect_symbol_name()?;
                self.check_declarable(&op, &tok)?;
                self.expect(&TokenKind::Colon)?;
                let mut sorts = vec![self.expect_ident()?.0];
                let mut has_args = false;
                loop {
                    if self.peek() == &TokenKind::Star {
                        self.bump();
                        sorts.push(self.expect_ident()?.0);
                    } else if self.peek() == &TokenKind::Arrow {
                        self.bump();
                        sorts.push(self.expect_ident()?.0);
                        has_args = true;
                        break;
                    } else {
                        break;
                    }
                }
                let decl = if has_args {
                    let result = sorts.pop().unwrap();
                    OpDecl { args: sorts, result, rigidity: rigidity(rigid) }
                } else {
                    if sorts.len() != 1 {
                        return Err(self.error_at(&tok, "constant declarations have a single result sort".into()));
                    }
                    OpDecl { args: vec![], result: sorts.pop().unwrap(), rigidity: rigidity(rigid) }
                };
                if rfol.ops.insert(op.clone(), decl).is_some() {
                    return Err(self.error_at(&tok, format!("duplicate op `{op}`")));
                }
            } else if self.is_kw("rel") {
                let kw = self.bump();
                if tag.is_prop() {
                    return Err(self.error_at(&kw, "PROP blocks declare atoms, not rels".into()));
                }
                let (rel, tok) = self.expect_ident()?;
                self.check_declarable(&rel, &tok)?;
                self.expect(&TokenKind::Colon)?;
                let mut sorts = vec![self.expect_ident()?.0];
                while self.peek() == &TokenKind::Star {
                    self.bump();
                    sorts.push(self.expect_ident()?.0);
                }
                if rfol
                    .rels
                    .insert(rel.clone(), RelDecl { args: sorts, rigidity: rigidity(rigid) })
                    .is_some()
                {
                    return Err(self.error_at(&tok, format!("duplicate rel `{rel}`")));
                }
            } else if self.is_kw("atom") || self.is_kw("atoms") {
                let kw = self.bump();
                if rigid {
                    return Err(self.error_at(&kw, "atoms carry no rigidity flag".into()));
                }
                if !tag.is_prop() {
                    return Err(self.error_at(&kw, "atom declarations belong to PROP blocks".into()));
                }
                loop {
                    let (atom, tok) = self.expect_ident()?;
                    self.check_declarable(&atom, &tok)?;
                    if !prop.atoms.insert(atom.clone()) {
                        return Err(self.error_at(&tok, format!("duplicate atom `{atom}`")));
                    }
                    if self.peek() == &TokenKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            } else {
                let found = self.peek().describe();
                return Err(self.error_here(format!(
                    "expected a declaration or `end`, found {found}"
                )));
            }
        }
        let sig = if tag.is_prop() {
            BaseSignature::Prop(prop)
        } else {
            BaseSignature::Rfol(rfol)
        };
        if let Err(e) = sig.validate() {
            return Err(self.error_here(format!("invalid base signature: {e}")));
        }
        Ok(sig)
    }

    fn hybrid_block(
        &mut self,
        spec: &SpecFile,
        name: String,
        tag: HybridTag,
    ) -> PResult<SpecBlock> {
        let mut imports = Vec::new();
        let mut base: Option<BaseSignature> = None;
        while self.is_kw("data") {
            self.bump();
            let (import, tok) = self.expect_ident()?;
            let block = spec
                .blocks
                .iter()
                .find_map(|b| match b {
                    SpecBlock::Base(bb) if bb.name == import => Some(bb),
                    _ => None,
                })
                .ok_or_else(|| {
                    self.error_at(&tok, format!("`{import}` is not a previously defined base spec"))
                })?;
            if block.tag.is_prop() != tag.base.is_prop() {
                return Err(self.error_at(
                    &tok,
                    format!(
                        "base spec `{import}` has logic {} but the hybrid tag expects {}",
                        block.tag.spelling(),
                        tag.base.spelling()
                    ),
                ));
            }
            base = Some(match base {
                None => block.signature.clone(),
                Some(acc) => merge_base(acc, &block.signature).map_err(|clash| {
                    self.error_at(&tok, format!("import `{import}` clashes on symbol `{clash}`"))
                })?,
            });
            imports.push(import);
        }
        let base = base.unwrap_or_else(|| {
            if tag.base.is_prop() {
                BaseSignature::empty_prop()
            } else {
                BaseSignature::empty_rfol()
            }
        });
        let braced = if self.peek() == &TokenKind::LBrace {
            self.bump();
            true
        } else {
            false
        };

        let mut sig = HybridSignature::new(base);
        let mut constraints = ConstraintSet::default();
        let mut axioms: Vec<HybridSentence> = Vec::new();
        loop {
            if self.should_stop() {
                return Err(Failed);
            }
            if self.is_kw("nominal") || self.is_kw("nominals") {
                self.bump();
                loop {
                    let (nominal, tok) = self.expect_ident()?;
                    self.check_declarable(&nominal, &tok)?;
                    if !sig.nominals.insert(nominal.clone()) {
                        return Err(self.error_at(&tok, format!("duplicate nominal `{nominal}`")));
                    }
                    if self.peek() == &TokenKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            } else if self.is_kw("modality") {
                self.bump();
                let (modality, tok) = self.expect_ident()?;
                self.check_declarable(&modality, &tok)?;
                self.expect(&TokenKind::Colon)?;
                let arity_tok = self.peek_token().clone();
                let arity = match self.peek().clone() {
                    TokenKind::Number(n) => {
                        self.bump();
                        n.parse::<usize>().unwrap_or(0)
                    }
                    other => {
                        return Err(
                            self.error_here(format!("expected an arity, found {}", other.describe()))
                        )
                    }
                };
                if arity < 2 {
                    return Err(self.error_at(
                        &arity_tok,
                        format!("modality `{modality}` has arity {arity}; the minimum is 2 (the arity counts the source world)"),
                    ));
                }
                if sig.modalities.insert(modality.clone(), arity).is_some() {
                    return Err(self.error_at(&tok, format!("duplicate modality `{modality}`")));
                }
            } else if self.is_kw("constraint") {
                self.bump();
                let (modality, tok) = self.expect_ident()?;
                let arity = *sig.modalities.get(&modality).ok_or_else(|| {
                    self.error_at(&tok, format!("constraint on undeclared modality `{modality}`"))
                })?;
                if arity != 2 {
                    return Err(self.error_at(
                        &tok,
                        format!("frame properties only attach to arity-2 modalities; `{modality}` has arity {arity}"),
                    ));
                }
                self.expect(&TokenKind::Colon)?;
                loop {
                    let (prop_name, ptok) = self.expect_ident()?;
                    let prop = FrameProperty::parse(&prop_name).ok_or_else(|| {
                        self.error_at(&ptok, format!(
                            "unknown frame property `{prop_name}` (expected reflexive, symmetric, transitive or serial)"
                        ))
                    })?;
                    constraints
                        .frame
                        .entry(modality.clone())
                        .or_default()
                        .insert(prop);
                    if self.peek() == &TokenKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            } else if self.peek() == &TokenKind::Dot {
                let dot = self.bump();
                if let Err(e) = sig.validate() {
                    return Err(self.error_at(&dot, format!("invalid hybrid signature: {e}")));
                }
                match self.sentence(&sig) {
                    Ok(sentence) => {
                        let issues = check_wellformed(&sig, &sentence);
                        if let Some(issue) = issues.first() {
                            return Err(self.error_at(
                                &dot,
                                format!("{} (at {})", issue.message, issue.path),
                            ));
                        }
                        axioms.push(sentence);
                    }
                    Err(Failed) => {
                        if self.stop_early {
                            return Err(Failed);
                        }
                        self.recover_to_axiom_boundary();
                    }
                }
            } else {
                break;
            }
        }
        if braced {
            self.expect(&TokenKind::RBrace)?;
        }
        self.expect_kw("end")?;
        if let Err(e) = sig.validate() {
            return Err(self.error_here(format!("invalid hybrid signature: {e}")));
        }
        Ok(SpecBlock::Hybrid(HybridBlock {
            theory: HybridTheory {
                name: name.clone(),
                signature: sig,
                axioms,
            },
            name,
            tag,
            imports,
            constraints,
        }))
    }

    fn recover_to_axiom_boundary(&mut self) {
        while !self.at_eof() {
            match self.peek() {
                TokenKind::Dot | TokenKind::RBrace => return,
                TokenKind::Ident(s) if s == "end" || s == "spec" => return,
                _ => {
                    self.bump();
                }
            }
        }
    }
}

fn rigidity(rigid: bool) -> Rigidity {
    if rigid {
        Rigidity::Rigid
    } else {
        Rigidity::Flexible
    }
}

fn merge_base(acc: BaseSignature, other: &BaseSignature) -> Result<BaseSignature, String> {
    match (acc, other) {
        (BaseSignature::Prop(mut a), BaseSignature::Prop(b)) => {
            for atom in &b.atoms {
                if !a.atoms.insert(atom.clone()) {
                    return Err(atom.clone());
                }
            }
            Ok(BaseSignature::Prop(a))
        }
        (BaseSignature::Rfol(mut a), BaseSignature::Rfol(b)) => {
            for (s, r) in &b.sorts {
                if a.sorts.insert(s.clone(), *r).is_some() {
                    return Err(s.clone());
                }
            }
            for (o, d) in &b.ops {
                if a.ops.insert(o.clone(), d.clone()).is_some() {
                    return Err(o.clone());
                }
            }
            for (rl, d) in &b.rels {
                if a.rels.insert(rl.clone(), d.clone()).is_some() {
                    return Err(rl.clone());
                }
            }
            Ok(BaseSignature::Rfol(a))
        }
        _ => Err("<kind>".into()),
    }
}

/// Sentence parsing: shared by axiom bodies and command-line goals.
pub(super) struct SentenceCtx<'a> {
    pub sig: &'a HybridSignature,
    pub bound_noms: Vec<String>,
    pub bound_rigids: IndexMap<String, String>,
}

impl Parser {
    pub(super) fn sentence(&mut self, sig: &HybridSignature) -> PResult<HybridSentence> {
        let mut ctx = SentenceCtx {
            sig,
            bound_noms: Vec::new(),
            bound_rigids: IndexMap::new(),
        };
        self.iff(&mut ctx)
    }

    fn iff(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        let lhs = self.impl_level(ctx)?;
        if self.peek() == &TokenKind::IffOp {
            self.bump();
            let rhs = self.impl_level(ctx)?;
            if self.peek() == &TokenKind::IffOp {
                return Err(self.error_here("`<=>` is not associative; add parentheses".into()));
            }
            // No Iff node in the sentence language: desugar.
            return Ok(HybridSentence::and(
                HybridSentence::implies(lhs.clone(), rhs.clone()),
                HybridSentence::implies(rhs, lhs),
            ));
        }
        Ok(lhs)
    }

    fn impl_level(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        let lhs = self.disj(ctx)?;
        if self.peek() == &TokenKind::ImpliesOp {
            self.bump();
            let rhs = self.impl_level(ctx)?;
            return Ok(HybridSentence::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        let mut lhs = self.conj(ctx)?;
        while self.peek() == &TokenKind::OrOp {
            self.bump();
            let rhs = self.conj(ctx)?;
            lhs = HybridSentence::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        let mut lhs = self.prefix(ctx)?;
        while self.peek() == &TokenKind::AndOp {
            self.bump();
            let rhs = self.prefix(ctx)?;
            lhs = HybridSentence::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        if self.is_kw("not") {
            self.bump();
            let body = self.prefix(ctx)?;
            return Ok(HybridSentence::not(body));
        }
        if self.peek() == &TokenKind::LBracket {
            self.bump();
            let (modality, tok) = self.expect_ident()?;
            self.check_modality(ctx, &modality, &tok)?;
            self.expect(&TokenKind::RBracket)?;
            let args = self.modal_args(ctx)?;
            return Ok(HybridSentence::Box { modality, args });
        }
        if self.peek() == &TokenKind::Less {
            self.bump();
            let (modality, tok) = self.expect_ident()?;
            self.check_modality(ctx, &modality, &tok)?;
            self.expect(&TokenKind::Greater)?;
            let args = self.modal_args(ctx)?;
            return Ok(HybridSentence::Diamond { modality, args });
        }
        self.primary(ctx)
    }

    fn check_modality(&mut self, ctx: &SentenceCtx, name: &str, tok: &Token) -> PResult<()> {
        if !ctx.sig.modalities.contains_key(name) {
            let t = tok.clone();
            return Err(self.error_at(&t, format!("unknown modality `{name}`")));
        }
        Ok(())
    }

    fn modal_args(&mut self, ctx: &mut SentenceCtx) -> PResult<Vec<HybridSentence>> {
        if self.peek() == &TokenKind::LParen {
            self.bump();
            let mut args = vec![self.iff(ctx)?];
            while self.peek() == &TokenKind::Comma {
                self.bump();
                args.push(self.iff(ctx)?);
            }
            self.expect(&TokenKind::RParen)?;
            Ok(args)
        } else {
            Ok(vec![self.prefix(ctx)?])
        }
    }

    fn primary(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        match self.peek().clone() {
            TokenKind::LParen => {
                self.bump();
                let s = self.iff(ctx)?;
                self.expect(&TokenKind::RParen)?;
                Ok(s)
            }
            TokenKind::At => {
                self.bump();
                let (nominal, tok) = self.expect_ident()?;
                if !ctx.sig.nominals.contains(&nominal)
                    && !ctx.bound_noms.iter().any(|b| b == &nominal)
                {
                    return Err(
                        self.error_at(&tok, format!("nominal `{nominal}` is neither declared nor bound"))
                    );
                }
                let body = if self.peek() == &TokenKind::Colon {
                    self.bump();
                    self.disj(ctx)?
                } else {
                    self.prefix(ctx)?
                };
                Ok(HybridSentence::at(nominal, body))
            }
            TokenKind::Ident(kw)
                if kw == "forall" || kw == "exists" || kw == "forallH" || kw == "existsH" =>
            {
                self.quantifier(ctx)
            }
            TokenKind::Ident(_) | TokenKind::Number(_) => self.atom_or_nominal(ctx),
            other => {
                Err(self.error_here(format!("expected a sentence, found {}", other.describe())))
            }
        }
    }

    fn quantifier(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        let (kw, _) = self.expect_ident()?;
        let universal = kw == "forall" || kw == "forallH";
        let mut binders = Vec::new();
        loop {
            let (binder, tok) = self.expect_ident()?;
            if RESERVED.contains(&binder.as_str()) {
                return Err(self.error_at(&tok, format!("`{binder}` is reserved")));
            }
            if ctx.sig.declares(&binder)
                || ctx.bound_noms.iter().any(|b| b == &binder)
                || ctx.bound_rigids.contains_key(&binder)
                || binders.iter().any(|(b, _): &(String, Token)| b == &binder)
            {
                return Err(self.error_at(
                    &tok,
                    format!("binder `{binder}` shadows a declared or enclosing name"),
                ));
            }
            binders.push((binder, tok));
            if self.peek() == &TokenKind::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(&TokenKind::Colon)?;
        let (sort, sort_tok) = self.expect_ident()?;
        let nominal_binding = sort == "World";
        if !nominal_binding {
            match &ctx.sig.base {
                BaseSignature::Prop(_) => {
                    return Err(self.error_at(
                        &sort_tok,
                        format!("sort `{sort}` unavailable: the base logic has no sorts (use `World` to bind nominals)"),
                    ))
                }
                BaseSignature::Rfol(r) => match r.sorts.get(&sort) {
                    None => {
                        return Err(self.error_at(&sort_tok, format!("unknown sort `{sort}`")))
                    }
                    Some(rig) if !rig.is_rigid() => {
                        return Err(self.error_at(
                            &sort_tok,
                            format!("quantified sort `{sort}` is flexible; only rigid sorts may be quantified"),
                        ))
                    }
                    Some(_) => {}
                },
            }
        }
        self.expect(&TokenKind::Dot)?;
        for (binder, _) in &binders {
            if nominal_binding {
                ctx.bound_noms.push(binder.clone());
            } else {
                ctx.bound_rigids.insert(binder.clone(), sort.clone());
            }
        }
        let body = self.iff(ctx);
        for (binder, _) in binders.iter().rev() {
            if nominal_binding {
                ctx.bound_noms.pop();
            } else {
                ctx.bound_rigids.shift_remove(binder);
            }
        }
        let mut out = body?;
        for (binder, _) in binders.into_iter().rev() {
            out = match (nominal_binding, universal) {
                (true, true) => HybridSentence::forall_nom(binder, out),
                (true, false) => HybridSentence::exists_nom(binder, out),
                (false, true) => HybridSentence::forall_rigid(binder, sort.clone(), out),
                (false, false) => HybridSentence::exists_rigid(binder, sort.clone(), out),
            };
        }
        Ok(out)
    }

    fn atom_or_nominal(&mut self, ctx: &mut SentenceCtx) -> PResult<HybridSentence> {
        // Nominal reference?
        if let TokenKind::Ident(name) = self.peek().clone() {
            if ctx.bound_noms.iter().any(|b| b == &name) || ctx.sig.nominals.contains(&name) {
                self.bump();
                return Ok(HybridSentence::Nominal(name));
            }
            // PROP atom?
            if let BaseSignature::Prop(p) = &ctx.sig.base {
                if p.atoms.contains(&name) {
                    self.bump();
                    return Ok(HybridSentence::Base(BaseSentence::PropAtom(name)));
                }
                let t = self.peek_token().clone();
                return Err(self.error_at(&t, format!("unknown name `{name}`")));
            }
            // Relational atom?
            if let BaseSignature::Rfol(r) = &ctx.sig.base {
                if r.rels.contains_key(&name) {
                    self.bump();
                    let mut args = Vec::new();
                    if self.peek() == &TokenKind::LParen {
                        self.bump();
                        args.push(self.term(ctx)?);
                        while self.peek() == &TokenKind::Comma {
                            self.bump();
                            args.push(self.term(ctx)?);
                        }
                        self.expect(&TokenKind::RParen)?;
                    }
                    return Ok(HybridSentence::Base(BaseSentence::RelAtom(name, args)));
                }
            }
        }
        // Equation over terms.
        let lhs = self.term(ctx)?;
        self.expect(&TokenKind::Equals)?;
        let rhs = self.term(ctx)?;
        Ok(HybridSentence::Base(BaseSentence::Equation(lhs, rhs)))
    }

    pub(super) fn term(&mut self, ctx: &mut SentenceCtx) -> PResult<Term> {
        let (name, tok) = self.expect_symbol_name()?;
        if ctx.bound_rigids.contains_key(&name) {
            return Ok(Term::Var(name));
        }
        let rfol = match &ctx.sig.base {
            BaseSignature::Rfol(r) => r,
            BaseSignature::Prop(_) => {
                return Err(self.error_at(&tok, format!("`{name}` is not a term: the base logic has no terms")))
            }
        };
        if !rfol.ops.contains_key(&name) {
            return Err(self.error_at(
                &tok,
                format!("`{name}` is neither a bound variable nor a declared op"),
            ));
        }
        let mut args = Vec::new();
        if self.peek() == &TokenKind::LParen {
            self.bump();
            args.push(self.term(ctx)?);
            while self.peek() == &TokenKind::Comma {
                self.bump();
                args.push(self.term(ctx)?);
            }
            self.expect(&TokenKind::RParen)?;
        }
        Ok(Term::App(name, args))
    }
}

/// Parses a standalone goal sentence against a signature, using the same
/// grammar as axiom bodies.
pub fn parse_goal(text: &str, sig: &HybridSignature) -> Result<HybridSentence, Vec<Diagnostic>> {
    let tokens = lex(text, "<goal>").map_err(|d| vec![d])?;
    let lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
    let mut parser = Parser {
        tokens,
        pos: 0,
        file: "<goal>".to_string(),
        lines,
        diagnostics: Vec::new(),
        stop_early: true,
    };
    let out = parser.sentence(sig);
    match out {
        Ok(sentence) if parser.at_eof() => {
            let issues = check_wellformed(sig, &sentence);
            if let Some(issue) = issues.first() {
                return Err(vec![Diagnostic::error(
                    "<goal>",
                    1,
                    1,
                    format!("{} (at {})", issue.message, issue.path),
                    text.to_string(),
                )]);
            }
            Ok(sentence)
        }
        Ok(_) => {
            parser.error_here("trailing input after sentence".into());
            Err(parser.diagnostics)
        }
        Err(Failed) => Err(parser.diagnostics),
    }
}
