"""
Example usage of the EvoVerify engine
Checks adaptation properties of a small adaptable process and the
Buyer/Seller/Bank choreography, then exports a report.
"""

from evoverify import (
    check_BA,
    check_EA,
    check_implements,
    check_well_formed,
    explore,
    model_check,
    parse_choreography,
    parse_process,
    parse_system,
    render_process,
)
from evoverify.config import load_settings
from evoverify.process import parse_barb
from evoverify.reports import format_verdict, generate_markdown_verdicts, to_html
from templates import FormulaSchemas, ProcessTemplates, ProtocolTemplates
from utils import export_all_formats, get_logger, setup_logging

logger = get_logger(__name__)


def main():
    """Main example function"""
    settings = load_settings()
    setup_logging(log_dir=settings.log_dir, log_level=settings.log_level)

    print("🔎 EvoVerify - Example Usage\n")

    # An error raised once and repaired by an update
    process = parse_process(ProcessTemplates.error_then_fix())
    logger.info(f"Example process: {ProcessTemplates.error_then_fix()}")
    print(f"Process: {render_process(process)}")
    graph = explore(process, max_states=1000)
    print(f"   States: {len(graph.states)} ({'complete' if graph.complete else 'incomplete'})\n")

    error = parse_barb("^e")
    verdicts = [
        check_BA(graph, error, 1),
        check_EA(graph, error),
    ]
    _, cb = model_check(graph, FormulaSchemas.CB(error, 2))
    verdicts.append(cb)

    for verdict in verdicts:
        print(format_verdict(verdict))
        print()

    # Buyer/Seller/Bank
    print("=" * 60)
    choreography = parse_choreography(ProtocolTemplates.buyer_seller_bank())
    system = parse_system(ProtocolTemplates.buyer_seller_bank_system())
    wf = check_well_formed(choreography)
    implements = check_implements(system, choreography)
    print(format_verdict(wf))
    print(format_verdict(implements))
    print("=" * 60)

    # Unordered sequence: the projection composes correctly but reorders interactions
    unordered = check_well_formed(parse_choreography(ProtocolTemplates.unordered_sequence()))
    print(format_verdict(unordered))

    print("\n💾 Exporting to files...")
    all_verdicts = verdicts + [wf, implements, unordered]
    markdown = generate_markdown_verdicts("EvoVerify example", all_verdicts, graph)
    exports = export_all_formats(
        [verdict.to_json() for verdict in all_verdicts],
        markdown,
        to_html(markdown, "EvoVerify example"),
        "example_verdicts",
    )

    print("\n✨ Export complete!")
    for format_name, filepath in exports.items():
        print(f"   {format_name.upper()}: {filepath}")


if __name__ == "__main__":
    main()
