"""
Protocol and process templates
Ready-made terms used by the walkthroughs and the tests.
"""

from typing import Dict


class ProtocolTemplates:
    """Predefined choreographies, systems and update bodies"""

    @staticmethod
    def buyer_seller_bank() -> str:
        """Buyer/Seller/Bank purchase protocol"""
        return ("Request:Buyer->Seller ; "
                "(Offer:Seller->Buyer | PayDescr:Seller->Bank) ; "
                "Payment:Buyer->Bank ; "
                "(Confirm:Bank->Seller | Receipt:Bank->Buyer)")

    @staticmethod
    def buyer_seller_bank_system() -> str:
        """Hand-written implementation of the Buyer/Seller/Bank protocol"""
        return ("[Request!Seller ; Offer? ; Payment!Bank ; Receipt?]@Buyer || "
                "[Request? ; (Offer!Buyer | PayDescr!Bank) ; Confirm?]@Seller || "
                "[PayDescr? ; Payment? ; (Receipt!Buyer | Confirm!Seller)]@Bank")

    @staticmethod
    def adaptable_buyer_seller_bank() -> str:
        """Buyer/Seller/Bank with the payment step enclosed in scope X"""
        return ("Request:Buyer->Seller ; "
                "(Offer:Seller->Buyer | PayDescr:Seller->Bank) ; "
                "X:{Buyer,Bank}[Payment:Buyer->Bank] ; "
                "(Confirm:Bank->Seller | Receipt:Bank->Buyer)")

    @staticmethod
    def visa_payment() -> str:
        """Replacement body for scope X: pay by card instead of a plain payment"""
        return "VISAcode:Buyer->Bank ; VISAok:Bank->Buyer"

    @staticmethod
    def visa_script() -> str:
        """Simulation script: request, switch the payment to VISA, run to completion"""
        return ("step Request\n"
                f"update X Buyer,Bank {ProtocolTemplates.visa_payment()}\n"
                "auto\n")

    @staticmethod
    def unordered_sequence() -> str:
        """Sequence of interactions between disjoint pairs of roles"""
        return "a:r->s ; b:t->u"

    @staticmethod
    def get_choreographies() -> Dict[str, str]:
        return {
            "bsb": ProtocolTemplates.buyer_seller_bank(),
            "adaptable-bsb": ProtocolTemplates.adaptable_buyer_seller_bank(),
            "visa": ProtocolTemplates.visa_payment(),
            "unordered": ProtocolTemplates.unordered_sequence(),
        }


class ProcessTemplates:
    """Adaptable processes illustrating the update discipline"""

    @staticmethod
    def discard_update() -> str:
        """The update removes the located process entirely"""
        return "a[b.0] | a{0}.c.0"

    @staticmethod
    def extend_update() -> str:
        """The update re-creates the locality and adds an output next to the old state"""
        return "a[b.0] | a{a[@ | ^x.0]}.0"

    @staticmethod
    def error_then_fix() -> str:
        """A fault is raised once and repaired by an update on its locality"""
        return "f[^e.0] | f{f[^ok.0]}.0"

    @staticmethod
    def recurring_error() -> str:
        """Errors are produced forever; exploration never completes"""
        return "!a.^e.0 | !^a.0"

    @staticmethod
    def get_processes() -> Dict[str, str]:
        return {
            "discard": ProcessTemplates.discard_update(),
            "extend": ProcessTemplates.extend_update(),
            "error-fix": ProcessTemplates.error_then_fix(),
            "recurring": ProcessTemplates.recurring_error(),
        }
