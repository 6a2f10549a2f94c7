//! `.hmodel` parsing: loads a Kripke model against an elaborated signature
//! and validates the structural invariants plus rigidity sharing.

use super::lexer::{lex, TokenKind};
use super::spec::{Failed, Parser};
use super::Diagnostic;
use crate::base::{
    BaseModel, BaseSignature, Element, OpTable, PropModel, RfolModel,
};
use crate::hybrid::HybridSignature;
use crate::kripke::{check_constraints, ConstraintSet, KripkeModel, World};
use indexmap::IndexMap;
use std::collections::BTreeSet;

/// Parses a model file against the signature it is meant to interpret.
pub fn parse_model(text: &str, sig: &HybridSignature) -> Result<KripkeModel, Vec<Diagnostic>> {
    parse_model_named(text, "<input>", sig)
}

pub fn parse_model_named(
    text: &str,
    file: &str,
    sig: &HybridSignature,
) -> Result<KripkeModel, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
    let mut parser = Parser {
        tokens,
        pos: 0,
        file: file.to_string(),
        lines,
        diagnostics: Vec::new(),
        stop_early: true,
    };
    let mut loader = ModelLoader {
        p: &mut parser,
        sig,
        worlds: Vec::new(),
        relations: IndexMap::new(),
        nominal_at: IndexMap::new(),
        rigid: RfolModel::default(),
        rigid_seen: Vec::new(),
        locals: IndexMap::new(),
        prop_locals: IndexMap::new(),
    };
    match loader.run() {
        Ok(model) => Ok(model),
        Err(Failed) => Err(parser.diagnostics),
    }
}

struct ModelLoader<'a, 'b> {
    p: &'a mut Parser,
    sig: &'b HybridSignature,
    worlds: Vec<String>,
    relations: IndexMap<String, BTreeSet<Vec<World>>>,
    nominal_at: IndexMap<String, World>,
    /// Rigid carriers/tables declared once at the top.
    rigid: RfolModel,
    rigid_seen: Vec<String>,
    /// Flexible content per world (RFOL).
    locals: IndexMap<String, RfolModel>,
    /// Valuations per world (PROP).
    prop_locals: IndexMap<String, IndexMap<String, bool>>,
}

impl ModelLoader<'_, '_> {
    fn run(&mut self) -> Result<KripkeModel, Failed> {
        if self.p.is_kw("model") {
            self.p.bump();
            self.p.expect_ident()?;
        }
        self.p.expect_kw("worlds")?;
        loop {
            let (world, tok) = self.p.expect_ident()?;
            if self.worlds.contains(&world) {
                return Err(self.p.error_at(&tok, format!("duplicate world `{world}`")));
            }
            self.worlds.push(world);
            if self.p.peek() == &TokenKind::Comma {
                self.p.bump();
            } else {
                break;
            }
        }
        while !self.p.at_eof() {
            if self.p.is_kw("relation") {
                self.relation()?;
            } else if self.p.is_kw("nominal") {
                self.nominal()?;
            } else if self.p.is_kw("carrier") {
                self.carrier(None)?;
            } else if self.p.is_kw("op") {
                self.op_table(None)?;
            } else if self.p.is_kw("rel") {
                self.rel_table(None)?;
            } else if self.p.is_kw("world") {
                self.world_block()?;
            } else {
                let found = self.p.peek().describe();
                return Err(self
                    .p
                    .error_here(format!("expected a model declaration, found {found}")));
            }
        }
        self.finish()
    }

    fn world_index(&mut self, name: &str, tok: &super::lexer::Token) -> Result<World, Failed> {
        match self.worlds.iter().position(|w| w == name) {
            Some(i) => Ok(i),
            None => Err(self.p.error_at(tok, format!("unknown world `{name}`"))),
        }
    }

    fn relation(&mut self) -> Result<(), Failed> {
        self.p.expect_kw("relation")?;
        let (modality, tok) = self.p.expect_ident()?;
        let arity = match self.sig.modalities.get(&modality) {
            Some(a) => *a,
            None => {
                return Err(self
                    .p
                    .error_at(&tok, format!("unknown modality `{modality}`")))
            }
        };
        if self.relations.contains_key(&modality) {
            return Err(self
                .p
                .error_at(&tok, format!("relation `{modality}` declared twice")));
        }
        self.p.expect(&TokenKind::Equals)?;
        self.p.expect(&TokenKind::LBrace)?;
        let mut tuples = BTreeSet::new();
        while self.p.peek() != &TokenKind::RBrace {
            let open = self.p.expect(&TokenKind::LParen)?;
            let mut tuple = Vec::new();
            loop {
                let (world, wtok) = self.p.expect_ident()?;
                tuple.push(self.world_index(&world, &wtok)?);
                if self.p.peek() == &TokenKind::Comma {
                    self.p.bump();
                } else {
                    break;
                }
            }
            self.p.expect(&TokenKind::RParen)?;
            if tuple.len() != arity {
                return Err(self.p.error_at(
                    &open,
                    format!(
                        "tuple of width {} for modality `{modality}` of arity {arity}",
                        tuple.len()
                    ),
                ));
            }
            tuples.insert(tuple);
            if self.p.peek() == &TokenKind::Comma {
                self.p.bump();
            }
        }
        self.p.expect(&TokenKind::RBrace)?;
        self.relations.insert(modality, tuples);
        Ok(())
    }

    fn nominal(&mut self) -> Result<(), Failed> {
        self.p.expect_kw("nominal")?;
        let (nominal, tok) = self.p.expect_ident()?;
        if !self.sig.nominals.contains(&nominal) {
            return Err(self
                .p
                .error_at(&tok, format!("unknown nominal `{nominal}`")));
        }
        if self.nominal_at.contains_key(&nominal) {
            return Err(self
                .p
                .error_at(&tok, format!("nominal `{nominal}` assigned twice")));
        }
        self.p.expect(&TokenKind::Equals)?;
        let (world, wtok) = self.p.expect_ident()?;
        let w = self.world_index(&world, &wtok)?;
        self.nominal_at.insert(nominal, w);
        Ok(())
    }

    fn rfol(&mut self, tok: &super::lexer::Token) -> Result<&crate::base::RfolSignature, Failed> {
        match &self.sig.base {
            BaseSignature::Rfol(r) => Ok(r),
            BaseSignature::Prop(_) => Err(self
                .p
                .error_at(tok, "carriers and tables require an RFOL base".into())),
        }
    }

    fn element(&mut self) -> Result<Element, Failed> {
        match self.p.peek().clone() {
            TokenKind::Number(n) => {
                self.p.bump();
                Ok(n.parse::<Element>().unwrap_or(0))
            }
            other => Err(self
                .p
                .error_here(format!("expected an element id, found {}", other.describe()))),
        }
    }

    /// `carrier S = { e, ... }`; at top level only for rigid sorts, inside a
    /// world block only for flexible ones.
    fn carrier(&mut self, world: Option<String>) -> Result<(), Failed> {
        self.p.expect_kw("carrier")?;
        let (sort, tok) = self.p.expect_ident()?;
        let rigid = {
            let r = self.rfol(&tok)?;
            match r.sorts.get(&sort) {
                Some(rig) => rig.is_rigid(),
                None => return Err(self.p.error_at(&tok, format!("unknown sort `{sort}`"))),
            }
        };
        match (&world, rigid) {
            (None, false) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("sort `{sort}` is flexible; declare its carrier inside a world block"),
                ))
            }
            (Some(_), true) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("rigid carrier `{sort}` redeclared per-world; declare it once at the top"),
                ))
            }
            _ => {}
        }
        self.p.expect(&TokenKind::Equals)?;
        self.p.expect(&TokenKind::LBrace)?;
        let mut elems = Vec::new();
        while self.p.peek() != &TokenKind::RBrace {
            elems.push(self.element()?);
            if self.p.peek() == &TokenKind::Comma {
                self.p.bump();
            }
        }
        self.p.expect(&TokenKind::RBrace)?;
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() {
            return Err(self
                .p
                .error_at(&tok, format!("carrier for `{sort}` must be nonempty")));
        }
        let target = match world {
            None => {
                self.rigid_seen.push(sort.clone());
                &mut self.rigid
            }
            Some(w) => self.locals.entry(w).or_default(),
        };
        if target.carriers.insert(sort.clone(), elems).is_some() {
            return Err(self
                .p
                .error_at(&tok, format!("carrier for `{sort}` declared twice")));
        }
        Ok(())
    }

    fn op_table(&mut self, world: Option<String>) -> Result<(), Failed> {
        self.p.expect_kw("op")?;
        let (op, tok) = self.p.expect_symbol_name()?;
        let (rigid, n_args) = {
            let r = self.rfol(&tok)?;
            match r.ops.get(&op) {
                Some(decl) => (decl.rigidity.is_rigid(), decl.args.len()),
                None => return Err(self.p.error_at(&tok, format!("unknown op `{op}`"))),
            }
        };
        match (&world, rigid) {
            (None, false) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("op `{op}` is flexible; declare its table inside a world block"),
                ))
            }
            (Some(_), true) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("rigid table `{op}` redeclared per-world; declare it once at the top"),
                ))
            }
            _ => {}
        }
        self.p.expect(&TokenKind::Equals)?;
        let mut table = OpTable::new();
        if n_args == 0 {
            let res = self.element()?;
            table.insert(Vec::new(), res);
        } else {
            self.p.expect(&TokenKind::LBrace)?;
            while self.p.peek() != &TokenKind::RBrace {
                let mut args = Vec::new();
                if self.p.peek() == &TokenKind::LParen {
                    self.p.bump();
                    loop {
                        args.push(self.element()?);
                        if self.p.peek() == &TokenKind::Comma {
                            self.p.bump();
                        } else {
                            break;
                        }
                    }
                    self.p.expect(&TokenKind::RParen)?;
                } else {
                    args.push(self.element()?);
                }
                if args.len() != n_args {
                    return Err(self.p.error_at(
                        &tok,
                        format!("entry of width {} for op `{op}` of arity {n_args}", args.len()),
                    ));
                }
                self.p.expect(&TokenKind::Arrow)?;
                let res = self.element()?;
                table.insert(args, res);
                if self.p.peek() == &TokenKind::Comma {
                    self.p.bump();
                }
            }
            self.p.expect(&TokenKind::RBrace)?;
        }
        let target = match world {
            None => {
                self.rigid_seen.push(op.clone());
                &mut self.rigid
            }
            Some(w) => self.locals.entry(w).or_default(),
        };
        if target.ops.insert(op.clone(), table).is_some() {
            return Err(self.p.error_at(&tok, format!("table for `{op}` declared twice")));
        }
        Ok(())
    }

    fn rel_table(&mut self, world: Option<String>) -> Result<(), Failed> {
        self.p.expect_kw("rel")?;
        let (rel, tok) = self.p.expect_ident()?;
        let (rigid, n_args) = {
            let r = self.rfol(&tok)?;
            match r.rels.get(&rel) {
                Some(decl) => (decl.rigidity.is_rigid(), decl.args.len()),
                None => return Err(self.p.error_at(&tok, format!("unknown rel `{rel}`"))),
            }
        };
        match (&world, rigid) {
            (None, false) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("rel `{rel}` is flexible; declare its table inside a world block"),
                ))
            }
            (Some(_), true) => {
                return Err(self.p.error_at(
                    &tok,
                    format!("rigid table `{rel}` redeclared per-world; declare it once at the top"),
                ))
            }
            _ => {}
        }
        self.p.expect(&TokenKind::Equals)?;
        self.p.expect(&TokenKind::LBrace)?;
        let mut tuples = BTreeSet::new();
        while self.p.peek() != &TokenKind::RBrace {
            self.p.expect(&TokenKind::LParen)?;
            let mut tuple = Vec::new();
            loop {
                tuple.push(self.element()?);
                if self.p.peek() == &TokenKind::Comma {
                    self.p.bump();
                } else {
                    break;
                }
            }
            self.p.expect(&TokenKind::RParen)?;
            if tuple.len() != n_args {
                return Err(self.p.error_at(
                    &tok,
                    format!("tuple of width {} for rel `{rel}` of arity {n_args}", tuple.len()),
                ));
            }
            tuples.insert(tuple);
            if self.p.peek() == &TokenKind::Comma {
                self.p.bump();
            }
        }
        self.p.expect(&TokenKind::RBrace)?;
        let target = match world {
            None => {
                self.rigid_seen.push(rel.clone());
                &mut self.rigid
            }
            Some(w) => self.locals.entry(w).or_default(),
        };
        if target.rels.insert(rel.clone(), tuples).is_some() {
            return Err(self.p.error_at(&tok, format!("table for `{rel}` declared twice")));
        }
        Ok(())
    }

    fn world_block(&mut self) -> Result<(), Failed> {
        self.p.expect_kw("world")?;
        let (world, wtok) = self.p.expect_ident()?;
        self.world_index(&world, &wtok)?;
        self.p.expect(&TokenKind::LBrace)?;
        while self.p.peek() != &TokenKind::RBrace {
            if self.p.is_kw("atom") {
                self.p.bump();
                let (atom, tok) = self.p.expect_ident()?;
                match &self.sig.base {
                    BaseSignature::Prop(p) if p.atoms.contains(&atom) => {}
                    BaseSignature::Prop(_) => {
                        return Err(self.p.error_at(&tok, format!("unknown atom `{atom}`")))
                    }
                    BaseSignature::Rfol(_) => {
                        return Err(self
                            .p
                            .error_at(&tok, "atom valuations require a PROP base".into()))
                    }
                }
                self.p.expect(&TokenKind::Equals)?;
                let value = if self.p.eat_kw("true") {
                    true
                } else if self.p.eat_kw("false") {
                    false
                } else {
                    let found = self.p.peek().describe();
                    return Err(self
                        .p
                        .error_here(format!("expected `true` or `false`, found {found}")));
                };
                self.prop_locals
                    .entry(world.clone())
                    .or_default()
                    .insert(atom, value);
            } else if self.p.is_kw("carrier") {
                self.carrier(Some(world.clone()))?;
            } else if self.p.is_kw("op") {
                self.op_table(Some(world.clone()))?;
            } else if self.p.is_kw("rel") {
                self.rel_table(Some(world.clone()))?;
            } else {
                let found = self.p.peek().describe();
                return Err(self
                    .p
                    .error_here(format!("expected a world-local declaration, found {found}")));
            }
        }
        self.p.expect(&TokenKind::RBrace)?;
        Ok(())
    }

    fn finish(&mut self) -> Result<KripkeModel, Failed> {
        // Totality of the nominal assignment.
        for nominal in &self.sig.nominals {
            if !self.nominal_at.contains_key(nominal) {
                return Err(self
                    .p
                    .error_here(format!("nominal `{nominal}` unassigned")));
            }
        }
        // Every modality needs a relation table (possibly empty).
        let mut relations = IndexMap::new();
        for modality in self.sig.modalities.keys() {
            relations.insert(
                modality.clone(),
                self.relations.shift_remove(modality).unwrap_or_default(),
            );
        }
        let local: Vec<BaseModel> = match &self.sig.base {
            BaseSignature::Prop(p) => self
                .worlds
                .iter()
                .map(|w| {
                    let given = self.prop_locals.get(w);
                    let valuation: IndexMap<String, bool> = p
                        .atoms
                        .iter()
                        .map(|a| {
                            let v = given.and_then(|g| g.get(a).copied()).unwrap_or(false);
                            (a.clone(), v)
                        })
                        .collect();
                    BaseModel::Prop(PropModel { valuation })
                })
                .collect(),
            BaseSignature::Rfol(_) => self
                .worlds
                .iter()
                .map(|w| {
                    let mut m = self.rigid.clone();
                    if let Some(flex) = self.locals.get(w) {
                        for (sort, carrier) in &flex.carriers {
                            m.carriers.insert(sort.clone(), carrier.clone());
                        }
                        for (op, table) in &flex.ops {
                            m.ops.insert(op.clone(), table.clone());
                        }
                        for (rel, table) in &flex.rels {
                            m.rels.insert(rel.clone(), table.clone());
                        }
                    }
                    BaseModel::Rfol(m)
                })
                .collect(),
        };
        let model = KripkeModel {
            signature: self.sig.clone(),
            worlds: self.worlds.clone(),
            relations,
            nominal_at: self.nominal_at.clone(),
            local,
        };
        if let Err(e) = model.validate() {
            return Err(self.p.error_here(format!("invalid model: {e}")));
        }
        let violations = check_constraints(&model, &ConstraintSet::default());
        if let Some(v) = violations.first() {
            return Err(self.p.error_here(format!("rigidity violation: {v}")));
        }
        Ok(model)
    }
}
