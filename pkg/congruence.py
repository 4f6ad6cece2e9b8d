if __name__ == "__main__":
    import sys
    from congruences.cli import main

    sys.exit(main())
