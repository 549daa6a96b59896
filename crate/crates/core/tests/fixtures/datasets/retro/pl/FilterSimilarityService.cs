public class FilterSimilarityService
{
    public void RemoveFilter(Filter filter)
    {
        _filterStore.Remove(filter);
    }
    public void SearchSimilarity(Similarity similarity)
    {
        _similarityStore.Search(similarity);
    }
}
