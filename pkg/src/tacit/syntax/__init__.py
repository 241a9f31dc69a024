from .lexer import Token, TokenStream, tokenize
from .printer import print_formula, print_hypothesis, print_judgment, print_term

__all__ = ["Token", "TokenStream", "tokenize", "print_formula",
           "print_hypothesis", "print_judgment", "print_term"]
