"""Linguistic rule checking end to end: diagnostics, messages, create fixes."""

from conftest import by_code, check_fixture, check_source
from rslkit.model import apply_edits

UC_RULE = (
    'LinguisticRule LR_1 "Use Case name" : Syntax [\n'
    "  property UseCase.name\n"
    "  pattern Verb + (DataEntity.name)\n"
    "  severity Error\n"
    "]\n"
)


class TestUseCaseNameScenario:
    def test_message_lines(self):
        _, diags = check_fixture("figure7.rsl")
        (d,) = by_code(diags, "RSL-L001")
        lines = d.message.splitlines()
        assert lines[0] == "This text must follow the pattern '(Verb) + (DataEntity.name)'"
        assert lines[1] == "The word 'Invoice' is expected to be the name of a/an 'DataEntity'"

    def test_fix_title(self):
        _, diags = check_fixture("figure7.rsl")
        (d,) = by_code(diags, "RSL-L001")
        assert d.fixes[0].title == "Create 'DataEntity' with name 'Invoice'"

    def test_diagnostic_points_at_name(self):
        rm, diags = check_fixture("figure7.rsl")
        (d,) = by_code(diags, "RSL-L001")
        src = open(rm.file, encoding="utf-8").read()
        assert src[d.span.offset : d.span.offset + d.span.length] == "Print Invoice"

    def test_applying_fix_satisfies_rule(self):
        rm, diags = check_fixture("figure7.rsl")
        (d,) = by_code(diags, "RSL-L001")
        src = open(rm.file, encoding="utf-8").read()
        fixed = apply_edits(src, d.fixes[0].edits)
        _, diags2 = check_source(fixed)
        assert by_code(diags2, "RSL-L001") == []

    def test_compliant_name_passes(self):
        src = UC_RULE + 'DataEntity e_1 "Invoice" : Document\nUseCase uc_1 "Print Invoice" : EntityPrint\n'
        _, diags = check_source(src)
        assert by_code(diags, "RSL-L001") == []


class TestPortugueseScenario:
    def test_portuguese_lexicon_selected_by_language_decl(self):
        _, diags = check_fixture("figure9_pt.rsl")
        (d,) = by_code(diags, "RSL-L001")
        assert "The word 'Fatura' is expected to be the name of a/an 'DataEntity'" in d.message
        assert d.fixes[0].title == "Create 'DataEntity' with name 'Fatura'"

    def test_compliant_portuguese_name(self):
        src = (
            "LinguisticLanguage l : Portuguese\n"
            + UC_RULE
            + 'DataEntity e_1 "Fatura" : Document\nUseCase uc_1 "Criar Fatura" : EntityCreate\n'
        )
        _, diags = check_source(src)
        assert by_code(diags, "RSL-L001") == []

    def test_missing_lexicon_reported(self):
        src = "LinguisticLanguage l : Japanese\n" + UC_RULE + 'UseCase uc_1 "X" : Other\n'
        _, diags = check_source(src)
        assert by_code(diags, "RSL-C004")
        assert by_code(diags, "RSL-L001") == []


class TestRuleMechanics:
    def test_severity_taken_from_rule(self):
        src = UC_RULE.replace("severity Error", "severity Warning") + 'UseCase uc_1 "Nothing" : Other\n'
        _, diags = check_source(src)
        (d,) = by_code(diags, "RSL-L001")
        assert d.severity == "Warning"

    def test_description_checked_per_sentence(self):
        src = (
            'LinguisticRule LR "FR text" : Syntax [\n'
            "  property FunctionalRequirement.description\n"
            '  pattern "System" + "shall" + (Verb)\n'
            "  severity Error\n"
            "]\n"
            'FunctionalRequirement fr_1 "F" : Functional [\n'
            '  description "System shall print. Users may not."\n'
            "]\n"
        )
        _, diags = check_source(src)
        assert len(by_code(diags, "RSL-L001")) == 1  # only the second sentence fails

    def test_rule_does_not_check_itself(self):
        src = (
            'LinguisticRule LR "Verb only" : Syntax [\n'
            "  property LinguisticRule.name\n"
            "  pattern Verb\n"
            "  severity Error\n"
            "]\n"
        )
        _, diags = check_source(src)
        assert by_code(diags, "RSL-L001") == []

    def test_no_create_fix_for_pos_failure(self):
        src = (
            'LinguisticRule LR "Actor name" : Syntax [\n'
            "  property Actor.name\n"
            "  pattern (Noun | ProperNoun)\n"
            "  severity Error\n"
            "]\n"
            'Actor a_1 "Approve" : User\n'
        )
        _, diags = check_source(src)
        (d,) = by_code(diags, "RSL-L001")
        assert d.fixes == ()
        assert d.message.splitlines()[1] == "Expected a Noun or ProperNoun"

    def test_shared_candidate_gets_one_creation(self):
        src = (
            UC_RULE
            + 'UseCase uc_1 "Print Report" : Other\n'
            + 'UseCase uc_2 "Export Report" : Other\n'
        )
        _, diags = check_source(src)
        l001 = by_code(diags, "RSL-L001")
        assert len(l001) == 2
        edits = {f.edits for d in l001 for f in d.fixes}
        assert len(edits) == 1, "both diagnostics must share one create fix"

    def test_created_id_is_fresh(self):
        src = (
            UC_RULE
            + "DataEntity ec_Report : Other\n"
            + 'UseCase uc_1 "Print Report" : Other\n'
        )
        _, diags = check_source(src)
        (d,) = by_code(diags, "RSL-L001")
        new_text = d.fixes[0].edits[0].new_text
        assert "ec_Report_2" in new_text
