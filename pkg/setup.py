from setuptools import find_packages, setup

# Long description from README
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    # Project metadata
    name="prefqbaf",
    version="0.1.0",
    author="Your Name",
    author_email="your.email@example.com",
    description="Base scores from user preference orderings for quantitative bipolar argumentation",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    keywords=["argumentation", "qbaf", "gradual semantics", "preferences", "decision support"],
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
    ],

    # Package details
    packages=find_packages(include=["prefqbaf", "prefqbaf.*"]),
    python_requires=">=3.9",

    # Dependencies
    install_requires=[
        "polars>=0.20.0",
        "numpy>=1.23.0",
        "networkx>=3.0",
        "pydantic>=2.0",
        "click>=7.0,<9.0",
        "click-help-colors>=0.9.1,<0.10",
        "rich>=11.0,<14.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "hypothesis>=6.80",
            "black>=23.7.0",
            "flake8>=6.1.0",
            "mypy>=1.5.0",
        ],
        "docs": [
            "sphinx>=7.0.0",
            "sphinx-rtd-theme>=1.3.0",
            "myst-parser>=2.0",
        ],
    },

    entry_points={
        "console_scripts": [
            "prefqbaf = prefqbaf.cli:run",
        ],
    },
)
