use std::fmt;

/// Inference rules. Every rule has a mirror image under symmetrization;
/// the base half of each pair is checked directly and the other half by
/// mirroring the node back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Id,
    Cut,
    WeakenL,
    WeakenR,
    ContractL,
    ContractR,
    ExpandL,
    ExpandR,
    AndR,
    AndL,
    OrL,
    OrR,
    ParR,
    ParL,
    TimesL,
    TimesR,
    ImpR,
    ImpL,
    ExclL,
    ExclR,
    ForallF,
    ForallR,
    ExistsF,
    ExistsR,
    EqIntro,
    NeqIntro,
    Refl,
    Irrefl,
    Subst,
    MemberAx,
    MemberDualAx,
    DualEm,
    DualNc,
    FocusAx,
    FocusAxDual,
    DAxiom,
    TopAxiom,
    TopAxiomDual,
    ConvR,
    ConvRInv,
    ConvL,
    ConvLInv,
    JoinR,
    JoinRInv,
    JoinL,
    JoinLInv,
    ParallelForall,
    ParallelExists,
    ParallelForallInv,
    ParallelExistsInv,
}

impl Rule {
    pub const ALL: [Rule; 50] = [
        Rule::Id,
        Rule::Cut,
        Rule::WeakenL,
        Rule::WeakenR,
        Rule::ContractL,
        Rule::ContractR,
        Rule::ExpandL,
        Rule::ExpandR,
        Rule::AndR,
        Rule::AndL,
        Rule::OrL,
        Rule::OrR,
        Rule::ParR,
        Rule::ParL,
        Rule::TimesL,
        Rule::TimesR,
        Rule::ImpR,
        Rule::ImpL,
        Rule::ExclL,
        Rule::ExclR,
        Rule::ForallF,
        Rule::ForallR,
        Rule::ExistsF,
        Rule::ExistsR,
        Rule::EqIntro,
        Rule::NeqIntro,
        Rule::Refl,
        Rule::Irrefl,
        Rule::Subst,
        Rule::MemberAx,
        Rule::MemberDualAx,
        Rule::DualEm,
        Rule::DualNc,
        Rule::FocusAx,
        Rule::FocusAxDual,
        Rule::DAxiom,
        Rule::TopAxiom,
        Rule::TopAxiomDual,
        Rule::ConvR,
        Rule::ConvRInv,
        Rule::ConvL,
        Rule::ConvLInv,
        Rule::JoinR,
        Rule::JoinRInv,
        Rule::JoinL,
        Rule::JoinLInv,
        Rule::ParallelForall,
        Rule::ParallelExists,
        Rule::ParallelForallInv,
        Rule::ParallelExistsInv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::Cut => "cut",
            Rule::WeakenL => "wl",
            Rule::WeakenR => "wr",
            Rule::ContractL => "contract_l",
            Rule::ContractR => "contract_r",
            Rule::ExpandL => "expand_l",
            Rule::ExpandR => "expand_r",
            Rule::AndR => "and_r",
            Rule::AndL => "and_l",
            Rule::OrL => "or_l",
            Rule::OrR => "or_r",
            Rule::ParR => "par_r",
            Rule::ParL => "par_l",
            Rule::TimesL => "times_l",
            Rule::TimesR => "times_r",
            Rule::ImpR => "imp_r",
            Rule::ImpL => "imp_l",
            Rule::ExclL => "excl_l",
            Rule::ExclR => "excl_r",
            Rule::ForallF => "forall_f",
            Rule::ForallR => "forall_r",
            Rule::ExistsF => "exists_f",
            Rule::ExistsR => "exists_r",
            Rule::EqIntro => "eq",
            Rule::NeqIntro => "neq",
            Rule::Refl => "refl",
            Rule::Irrefl => "irrefl",
            Rule::Subst => "subst",
            Rule::MemberAx => "mem",
            Rule::MemberDualAx => "mem_dual",
            Rule::DualEm => "dual_em",
            Rule::DualNc => "dual_nc",
            Rule::FocusAx => "focus",
            Rule::FocusAxDual => "focus_dual",
            Rule::DAxiom => "d_axiom",
            Rule::TopAxiom => "top_axiom",
            Rule::TopAxiomDual => "top_axiom_dual",
            Rule::ConvR => "conv_r",
            Rule::ConvRInv => "conv_r_inv",
            Rule::ConvL => "conv_l",
            Rule::ConvLInv => "conv_l_inv",
            Rule::JoinR => "join_r",
            Rule::JoinRInv => "join_r_inv",
            Rule::JoinL => "join_l",
            Rule::JoinLInv => "join_l_inv",
            Rule::ParallelForall => "parallel_forall",
            Rule::ParallelExists => "parallel_exists",
            Rule::ParallelForallInv => "parallel_forall_inv",
            Rule::ParallelExistsInv => "parallel_exists_inv",
        }
    }

    pub fn parse(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    /// The rule a node uses after symmetrization.
    pub fn mirror(self) -> Rule {
        use Rule::*;
        match self {
            Id => Id,
            Cut => Cut,
            Subst => Subst,
            DAxiom => DAxiom,
            WeakenL => WeakenR,
            WeakenR => WeakenL,
            ContractL => ContractR,
            ContractR => ContractL,
            ExpandL => ExpandR,
            ExpandR => ExpandL,
            AndR => OrL,
            OrL => AndR,
            AndL => OrR,
            OrR => AndL,
            ParR => TimesL,
            TimesL => ParR,
            ParL => TimesR,
            TimesR => ParL,
            ImpR => ExclL,
            ExclL => ImpR,
            ImpL => ExclR,
            ExclR => ImpL,
            ForallF => ExistsF,
            ExistsF => ForallF,
            ForallR => ExistsR,
            ExistsR => ForallR,
            EqIntro => NeqIntro,
            NeqIntro => EqIntro,
            Refl => Irrefl,
            Irrefl => Refl,
            MemberAx => MemberDualAx,
            MemberDualAx => MemberAx,
            DualEm => DualNc,
            DualNc => DualEm,
            FocusAx => FocusAxDual,
            FocusAxDual => FocusAx,
            TopAxiom => TopAxiomDual,
            TopAxiomDual => TopAxiom,
            ConvR => ConvL,
            ConvL => ConvR,
            ConvRInv => ConvLInv,
            ConvLInv => ConvRInv,
            JoinR => JoinL,
            JoinL => JoinR,
            JoinRInv => JoinLInv,
            JoinLInv => JoinRInv,
            ParallelForall => ParallelExists,
            ParallelExists => ParallelForall,
            ParallelForallInv => ParallelExistsInv,
            ParallelExistsInv => ParallelForallInv,
        }
    }

    /// Rules checked directly rather than through their mirror.
    pub fn is_base(self) -> bool {
        use Rule::*;
        matches!(
            self,
            Id | Cut
                | Subst
                | DAxiom
                | WeakenR
                | ContractR
                | ExpandR
                | AndR
                | AndL
                | ParR
                | ParL
                | ImpR
                | ImpL
                | ForallF
                | ForallR
                | EqIntro
                | Refl
                | MemberAx
                | DualEm
                | FocusAx
                | TopAxiom
                | ConvR
                | ConvRInv
                | JoinR
                | JoinRInv
                | ParallelForall
                | ParallelForallInv
        )
    }

    /// Number of premises.
    pub fn arity(self) -> usize {
        use Rule::*;
        match self {
            Id | Refl | Irrefl | MemberAx | MemberDualAx | DualEm | DualNc | FocusAx | FocusAxDual | DAxiom
            | TopAxiom | TopAxiomDual => 0,
            Cut | AndR | OrL | ParL | TimesR | ImpL | ExclR | ForallR | ExistsR => 2,
            _ => 1,
        }
    }

    pub fn is_structural(self) -> bool {
        use Rule::*;
        matches!(self, WeakenL | WeakenR | ContractL | ContractR | ExpandL | ExpandR | Cut)
    }

    pub fn is_derived(self) -> bool {
        matches!(
            self,
            Rule::ParallelForall | Rule::ParallelExists | Rule::ParallelForallInv | Rule::ParallelExistsInv
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_is_an_involution_pairing_base_rules() {
        for r in Rule::ALL {
            assert_eq!(r.mirror().mirror(), r);
            assert_eq!(r.mirror().arity(), r.arity());
            assert!(r.is_base() || r.mirror().is_base(), "{r}");
            assert_eq!(Rule::parse(r.name()), Some(r));
        }
    }
}
