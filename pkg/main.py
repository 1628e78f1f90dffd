#!/usr/bin/env python3
"""
InterpIQ - Hardy-Orlicz Interpolation Lab
Main entry point for the application
"""

def main():
    """Main entry point for console script"""
    try:
        from interpiq.cli.main import app
        app()
    except ImportError as e:
        print(f"❌ Import error: {e}")
        print("💡 Make sure you've installed InterpIQ properly:")
        print("   pip install -e .")
        exit(1)

if __name__ == "__main__":
    main()
