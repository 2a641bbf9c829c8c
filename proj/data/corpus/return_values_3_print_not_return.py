# exercise: return_values
# pattern: semantic
def add(num1, num2):
    print(num1 + num2)

result = add(2, 6)
print(result)
