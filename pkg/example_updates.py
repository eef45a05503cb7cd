"""
Dynamic update walkthrough
Simulates the adaptable Buyer/Seller/Bank choreography and its projection
while the payment scope is replaced by a VISA payment.
"""

from evoverify import parse_choreography, project_system, render_system, simulate, uproject, validate_updatable
from evoverify.choreography import simplify
from evoverify.config import load_settings
from evoverify.printer import render
from evoverify.reports import format_validation, generate_markdown_run, to_html
from templates import ProtocolTemplates
from utils import export_all_formats, setup_logging


def main():
    settings = load_settings()
    setup_logging(log_dir=settings.log_dir, log_level=settings.log_level)
    print("🔄 EvoVerify - Dynamic Updates\n")

    adaptable = parse_choreography(ProtocolTemplates.adaptable_buyer_seller_bank())
    print(f"Choreography: {render(adaptable)}")
    print(f"Well defined: {format_validation(validate_updatable(adaptable))}\n")

    print("Projection:")
    for role in ("Buyer", "Seller", "Bank"):
        print(f"   [{render(simplify(uproject(adaptable, role)))}]@{role}")

    script = ProtocolTemplates.visa_script().splitlines()

    print("\n📜 Choreography run")
    log = simulate(adaptable, script, normalize=True)
    print(log.to_text())

    print("\n📜 System run")
    system = project_system(adaptable)
    print(f"Initial system: {render_system(system)}")
    system_log = simulate(system, script, normalize=True)
    print(system_log.to_text())

    markdown = generate_markdown_run(log) + "\n" + generate_markdown_run(system_log)
    exports = export_all_formats(
        {"choreography": log.to_json(), "system": system_log.to_json()},
        markdown,
        to_html(markdown, "Adaptable Buyer/Seller/Bank"),
        "example_updates",
    )
    print("\n✨ Export complete!")
    for format_name, filepath in exports.items():
        print(f"   {format_name.upper()}: {filepath}")


if __name__ == "__main__":
    main()
