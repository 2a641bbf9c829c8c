def add(num1, num2):
    return num1 + num2

result = add(2, 6)
print(result)
