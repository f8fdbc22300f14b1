"""mcqkit: generate, validate, and bank multiple-choice math items."""

__version__ = "0.1.0"
